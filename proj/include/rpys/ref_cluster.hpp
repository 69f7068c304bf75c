#ifndef RPYS_REF_CLUSTER_HPP
#define RPYS_REF_CLUSTER_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rpys/ref_parse.hpp"

namespace rpys {

struct WeightedRef {
  CitedRef ref;
  long long count = 1;

  bool operator==(const WeightedRef&) const = default;
};

/// Variants of one cited work inside a single reference publication year.
/// tcr is the sum of member counts.
struct RefCluster {
  long long cluster_id = 0;
  CitedRef canonical;
  std::vector<WeightedRef> members;
  long long tcr = 0;

  bool operator==(const RefCluster&) const = default;
};

struct ClusterConfig {
  double threshold = 0.75;
  // Clusters never span reference years; false is rejected.
  bool block_by_year = true;
};

std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - L(a, b) / max(|a|, |b|); two empty keys are identical.
double similarity(const RefKey& a, const RefKey& b);

/// Highest count wins; ties go to the smaller normalized key, then raw text.
const CitedRef& elect_canonical(std::span<const WeightedRef> members);

/// Single-linkage clustering within each rpy block: two refs share a
/// cluster iff a chain of pairwise similarities >= threshold connects them.
/// Output is ordered by tcr descending then canonical key ascending, with
/// cluster ids 1..n in that order. Throws std::invalid_argument for a
/// threshold outside [0, 1] or a non-positive count.
std::vector<RefCluster> cluster_refs(std::span<const WeightedRef> refs,
                                     const ClusterConfig& config = {});

}  // namespace rpys

#endif
