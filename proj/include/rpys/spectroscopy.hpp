#ifndef RPYS_SPECTROSCOPY_HPP
#define RPYS_SPECTROSCOPY_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rpys/ref_cluster.hpp"

namespace rpys {

/// Statistics for one reference publication year. Stages fill the fields
/// in order: count, then median/deviation, then rank/quantile.
struct RpyPoint {
  int year = 0;
  long long count = 0;
  double median = 0.0;     // over the window [year - 2, year + 2], clipped to the range
  double deviation = 0.0;  // count - median
  double rank = 0.0;       // ascending by count, ties averaged
  double quantile = 0.0;   // (rank - 0.5) / n * 100

  bool operator==(const RpyPoint&) const = default;
};

struct RpySeries {
  int year_min = 0;
  int year_max = 0;
  std::vector<RpyPoint> points;  // one per year, consecutive

  const RpyPoint* at(int year) const;
  long long count_at(int year) const;

  bool operator==(const RpySeries&) const = default;
};

struct AnalysisConfig {
  int year_min = 0;
  int year_max = 0;
  double peak_min_deviation = 10.0;
  std::optional<int> peak_top_n;
  int top_k_refs = 3;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

struct RankedCluster {
  RefCluster cluster;
  double share = 0.0;  // cluster tcr / count of the year
};

struct Peak {
  int year = 0;
  double deviation = 0.0;
  long long count = 0;
  double median = 0.0;
  std::vector<RankedCluster> top_clusters;
};

struct YearCount {
  int year = 0;
  long long count = 1;
};

/// Dense per-year totals over [year_min, year_max]; years outside are ignored.
RpySeries count_by_rpy(std::span<const YearCount> refs, int year_min, int year_max);

RpySeries median_deviation(RpySeries series);

RpySeries hazen_quantiles(RpySeries series);

/// Years whose deviation is positive, at least both neighbours' (missing
/// neighbours count as -inf) and at least peak_min_deviation. With
/// peak_top_n, only the largest deviations survive (earlier year wins ties).
/// Returned peaks are sorted by year and carry no clusters yet.
std::vector<Peak> detect_peaks(const RpySeries& series, const AnalysisConfig& config);

/// Clusters of one year, tcr descending then canonical key, truncated to k.
/// share is tcr / year_count, or 0 when year_count is 0.
std::vector<RankedCluster> top_refs_for_year(std::span<const RefCluster> clusters, int year,
                                             int k, long long year_count);
std::vector<RankedCluster> top_refs_for_year(std::span<const RefCluster> clusters, int year,
                                             int k, const RpySeries& series);

/// Runs count, median and quantile stages.
RpySeries build_series(std::span<const YearCount> refs, int year_min, int year_max);

}  // namespace rpys

#endif
