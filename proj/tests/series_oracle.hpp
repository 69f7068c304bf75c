#ifndef RPYS_TESTS_SERIES_ORACLE_HPP
#define RPYS_TESTS_SERIES_ORACLE_HPP

// Independent references for the spectrum statistics, written directly
// from the definitions rather than from the library's code path.

#include <algorithm>
#include <vector>

namespace rpys::test {

/// Median of counts over years t-2..t+2 that exist in the series.
inline std::vector<double> oracle_medians(const std::vector<long long>& counts) {
  const int n = static_cast<int>(counts.size());
  std::vector<double> out;
  for (int t = 0; t < n; ++t) {
    std::vector<long long> w;
    for (const int off : {-2, -1, 0, 1, 2}) {
      if (t + off >= 0 && t + off < n) w.push_back(counts[static_cast<std::size_t>(t + off)]);
    }
    std::sort(w.begin(), w.end());
    const auto k = w.size();
    // exact in doubles: integers or half-integers
    out.push_back(k % 2 ? static_cast<double>(w[k / 2])
                        : static_cast<double>(w[k / 2 - 1] + w[k / 2]) / 2.0);
  }
  return out;
}

/// Fractional rank: 1 + (number smaller) + (number of equal others) / 2.
inline std::vector<double> oracle_ranks(const std::vector<long long>& counts) {
  std::vector<double> out;
  for (const auto c : counts) {
    double smaller = 0, equal = 0;
    for (const auto o : counts) {
      if (o < c) smaller += 1;
      if (o == c) equal += 1;
    }
    out.push_back(1.0 + smaller + (equal - 1.0) / 2.0);
  }
  return out;
}

inline std::vector<double> oracle_quantiles(const std::vector<long long>& counts) {
  const auto ranks = oracle_ranks(counts);
  std::vector<double> q;
  for (const auto i : ranks) q.push_back((i - 0.5) / static_cast<double>(counts.size()) * 100.0);
  return q;
}

}  // namespace rpys::test

#endif
