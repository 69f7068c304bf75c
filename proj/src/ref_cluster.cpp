#include "rpys/ref_cluster.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace rpys {

namespace {

double similarity_from_distance(std::size_t distance, std::size_t max_len) {
  if (max_len == 0) return 1.0;
  return 1.0 - static_cast<double>(distance) / static_cast<double>(max_len);
}

// Edit distance capped at limit + 1; only cells within `limit` of the
// diagonal are evaluated.
std::size_t bounded_levenshtein(std::string_view a, std::string_view b, std::size_t limit) {
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  if (lb - la > limit) return limit + 1;
  if (la == 0) return lb;

  const std::size_t inf = limit + 1;
  std::vector<std::size_t> prev(lb + 1, inf);
  std::vector<std::size_t> cur(lb + 1, inf);
  for (std::size_t j = 0; j <= std::min(lb, limit); ++j) prev[j] = j;

  for (std::size_t i = 1; i <= la; ++i) {
    const std::size_t lo = i > limit ? i - limit : 1;
    const std::size_t hi = std::min(lb, i + limit);
    std::fill(cur.begin(), cur.end(), inf);
    if (lo == 1) cur[0] = i <= limit ? i : inf;
    std::size_t row_min = cur[0];
    for (std::size_t j = lo; j <= hi; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      const std::size_t del = prev[j] + 1;
      const std::size_t ins = cur[j - 1] + 1;
      cur[j] = std::min({sub, del, ins, inf});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > limit) return inf;
    std::swap(prev, cur);
  }
  return std::min(prev[lb], inf);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Largest distance that still satisfies similarity >= threshold for a pair
// whose longer key has max_len characters; nullopt when none does.
std::optional<std::size_t> max_merge_distance(std::size_t max_len, double threshold) {
  if (max_len == 0) return 0;
  auto guess = static_cast<long long>((1.0 - threshold) * static_cast<double>(max_len));
  guess = std::clamp<long long>(guess, 0, static_cast<long long>(max_len));
  auto ok = [&](long long d) {
    return similarity_from_distance(static_cast<std::size_t>(d), max_len) >= threshold;
  };
  while (guess < static_cast<long long>(max_len) && ok(guess + 1)) ++guess;
  while (guess >= 0 && !ok(guess)) --guess;
  if (guess < 0) return std::nullopt;
  return static_cast<std::size_t>(guess);
}

struct Block {
  std::vector<std::size_t> inputs;         // indices into the caller's refs
  std::vector<std::vector<std::size_t>> groups;
};

void cluster_block(Block& block, const std::vector<RefKey>& keys, double threshold) {
  // Identical keys always merge; compare distinct keys pairwise.
  std::map<std::string_view, std::vector<std::size_t>> by_key;
  for (const auto idx : block.inputs) by_key[keys[idx].key].push_back(idx);

  std::vector<std::string_view> unique;
  unique.reserve(by_key.size());
  for (const auto& [k, _] : by_key) unique.push_back(k);

  std::size_t longest = 0;
  for (const auto k : unique) longest = std::max(longest, k.size());
  std::vector<std::optional<std::size_t>> limits(longest + 1);
  for (std::size_t m = 0; m <= longest; ++m) limits[m] = max_merge_distance(m, threshold);

  DisjointSets sets(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      const auto m = std::max(unique[i].size(), unique[j].size());
      const auto& limit = limits[m];
      if (!limit) continue;
      const auto diff = unique[i].size() > unique[j].size() ? unique[i].size() - unique[j].size()
                                                            : unique[j].size() - unique[i].size();
      if (diff > *limit) continue;
      if (sets.find(i) == sets.find(j)) continue;
      if (bounded_levenshtein(unique[i], unique[j], *limit) <= *limit) sets.unite(i, j);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    auto& g = groups[sets.find(i)];
    const auto& idxs = by_key[unique[i]];
    g.insert(g.end(), idxs.begin(), idxs.end());
  }
  for (auto& [_, g] : groups) block.groups.push_back(std::move(g));
}

bool member_before(const WeightedRef& a, const RefKey& ka, const WeightedRef& b,
                   const RefKey& kb) {
  if (a.count != b.count) return a.count > b.count;
  if (ka != kb) return ka < kb;
  return a.ref.raw < b.ref.raw;
}

}  // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return bounded_levenshtein(a, b, std::max(a.size(), b.size()));
}

double similarity(const RefKey& a, const RefKey& b) {
  return similarity_from_distance(levenshtein(a.key, b.key), std::max(a.key.size(), b.key.size()));
}

const CitedRef& elect_canonical(std::span<const WeightedRef> members) {
  if (members.empty()) throw std::invalid_argument("elect_canonical: no members");
  std::size_t best = 0;
  RefKey best_key = normalize_key(members[0].ref);
  for (std::size_t i = 1; i < members.size(); ++i) {
    auto key = normalize_key(members[i].ref);
    if (member_before(members[i], key, members[best], best_key)) {
      best = i;
      best_key = std::move(key);
    }
  }
  return members[best].ref;
}

std::vector<RefCluster> cluster_refs(std::span<const WeightedRef> refs,
                                     const ClusterConfig& config) {
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    throw std::invalid_argument("cluster threshold must lie in [0, 1]");
  }
  // clusters spanning years would move counts between spectrum bins
  if (!config.block_by_year) throw std::invalid_argument("year blocking cannot be disabled");
  std::vector<RefKey> keys;
  keys.reserve(refs.size());
  for (const auto& r : refs) {
    if (r.count < 1) throw std::invalid_argument("occurrence counts must be positive");
    keys.push_back(normalize_key(r.ref));
  }

  std::map<std::optional<int>, Block> blocks;
  for (std::size_t i = 0; i < refs.size(); ++i) blocks[refs[i].ref.rpy].inputs.push_back(i);

  std::vector<Block*> work;
  work.reserve(blocks.size());
  for (auto& [_, b] : blocks) work.push_back(&b);

  // Blocks are independent; results are gathered in block order below.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < work.size(); i = next++) cluster_block(*work[i], keys, config.threshold);
  };
  const auto n_threads =
      std::min<std::size_t>(work.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  std::vector<RefCluster> clusters;
  for (const auto* block : work) {
    for (const auto& group : block->groups) {
      std::vector<std::size_t> order = group;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return member_before(refs[a], keys[a], refs[b], keys[b]);
      });
      RefCluster c;
      for (const auto idx : order) {
        c.members.push_back(refs[idx]);
        c.tcr += refs[idx].count;
      }
      c.canonical = c.members.front().ref;
      clusters.push_back(std::move(c));
    }
  }

  std::vector<RefKey> canon_keys;
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& c : clusters) canon_keys.push_back(normalize_key(c.canonical));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (clusters[a].tcr != clusters[b].tcr) return clusters[a].tcr > clusters[b].tcr;
    if (canon_keys[a] != canon_keys[b]) return canon_keys[a] < canon_keys[b];
    return clusters[a].canonical.raw < clusters[b].canonical.raw;
  });

  std::vector<RefCluster> out;
  out.reserve(clusters.size());
  for (const auto i : order) {
    out.push_back(std::move(clusters[i]));
    out.back().cluster_id = static_cast<long long>(out.size());
  }
  return out;
}

}  // namespace rpys
