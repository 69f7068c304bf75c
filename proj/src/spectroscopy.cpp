#include "rpys/spectroscopy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rpys {

const RpyPoint* RpySeries::at(int year) const {
  if (points.empty() || year < year_min || year > year_max) return nullptr;
  return &points[static_cast<std::size_t>(year - year_min)];
}

long long RpySeries::count_at(int year) const {
  const auto* p = at(year);
  return p ? p->count : 0;
}

void AnalysisConfig::validate() const {
  if (year_min > year_max) {
    throw std::invalid_argument("year range is empty: " + std::to_string(year_min) + " > " +
                                std::to_string(year_max));
  }
  if (!(peak_min_deviation >= 0.0)) throw std::invalid_argument("peak_min_deviation must be >= 0");
  if (peak_top_n && *peak_top_n < 1) throw std::invalid_argument("peak_top_n must be >= 1");
  if (top_k_refs < 1) throw std::invalid_argument("top_k_refs must be >= 1");
}

RpySeries count_by_rpy(std::span<const YearCount> refs, int year_min, int year_max) {
  if (year_min > year_max) throw std::invalid_argument("count_by_rpy: year_min > year_max");
  RpySeries s;
  s.year_min = year_min;
  s.year_max = year_max;
  s.points.resize(static_cast<std::size_t>(year_max - year_min + 1));
  for (int y = year_min; y <= year_max; ++y) s.points[static_cast<std::size_t>(y - year_min)].year = y;
  for (const auto& r : refs) {
    if (r.year < year_min || r.year > year_max) continue;
    s.points[static_cast<std::size_t>(r.year - year_min)].count += r.count;
  }
  return s;
}

RpySeries median_deviation(RpySeries series) {
  auto& pts = series.points;
  const auto n = static_cast<long long>(pts.size());
  std::vector<long long> window;
  window.reserve(5);
  for (long long i = 0; i < n; ++i) {
    window.clear();
    for (long long j = std::max(0LL, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      window.push_back(pts[static_cast<std::size_t>(j)].count);
    }
    std::sort(window.begin(), window.end());
    const auto w = window.size();
    const double m = w % 2 == 1
                         ? static_cast<double>(window[w / 2])
                         : (static_cast<double>(window[w / 2 - 1]) + static_cast<double>(window[w / 2])) / 2.0;
    auto& p = pts[static_cast<std::size_t>(i)];
    p.median = m;
    p.deviation = static_cast<double>(p.count) - m;
  }
  return series;
}

RpySeries hazen_quantiles(RpySeries series) {
  auto& pts = series.points;
  const auto n = pts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].count < pts[b].count; });
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pts[order[j]].count == pts[order[i]].count) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      auto& p = pts[order[k]];
      p.rank = avg;
      p.quantile = (avg - 0.5) / static_cast<double>(n) * 100.0;
    }
    i = j;
  }
  return series;
}

std::vector<Peak> detect_peaks(const RpySeries& series, const AnalysisConfig& config) {
  const auto& pts = series.points;
  const auto n = pts.size();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<Peak> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pts[i].deviation;
    const double left = i > 0 ? pts[i - 1].deviation : kNone;
    const double right = i + 1 < n ? pts[i + 1].deviation : kNone;
    if (d > 0.0 && d >= left && d >= right && d >= config.peak_min_deviation) {
      peaks.push_back({pts[i].year, d, pts[i].count, pts[i].median, {}});
    }
  }
  if (config.peak_top_n && peaks.size() > static_cast<std::size_t>(*config.peak_top_n)) {
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.deviation > b.deviation; });
    peaks.resize(static_cast<std::size_t>(*config.peak_top_n));
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.year < b.year; });
  }
  return peaks;
}

std::vector<RankedCluster> top_refs_for_year(std::span<const RefCluster> clusters, int year,
                                             int k, long long year_count) {
  if (k < 1) throw std::invalid_argument("top_refs_for_year: k must be >= 1");
  std::vector<std::pair<RefKey, const RefCluster*>> hits;
  for (const auto& c : clusters) {
    if (c.canonical.rpy == year) hits.emplace_back(normalize_key(c.canonical), &c);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.second->tcr != b.second->tcr) return a.second->tcr > b.second->tcr;
    return a.first < b.first;
  });
  if (hits.size() > static_cast<std::size_t>(k)) hits.resize(static_cast<std::size_t>(k));

  std::vector<RankedCluster> out;
  out.reserve(hits.size());
  for (const auto& [_, c] : hits) {
    const double share =
        year_count > 0 ? static_cast<double>(c->tcr) / static_cast<double>(year_count) : 0.0;
    out.push_back({*c, share});
  }
  return out;
}

std::vector<RankedCluster> top_refs_for_year(std::span<const RefCluster> clusters, int year,
                                             int k, const RpySeries& series) {
  return top_refs_for_year(clusters, year, k, series.count_at(year));
}

RpySeries build_series(std::span<const YearCount> refs, int year_min, int year_max) {
  return hazen_quantiles(median_deviation(count_by_rpy(refs, year_min, year_max)));
}

}  // namespace rpys
