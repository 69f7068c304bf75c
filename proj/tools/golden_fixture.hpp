#ifndef RPYS_TOOLS_GOLDEN_FIXTURE_HPP
#define RPYS_TOOLS_GOLDEN_FIXTURE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace rpys::fixture {

/// One landmark year of the tribology corpus: the year's total reference
/// count, the size of its dominant work and that work's spellings.
struct PeakYear {
  int year;
  long long tcr;
  long long top_tcr;
  std::string canonical;              // most frequent spelling
  std::vector<std::string> variants;  // one-edit spellings of the same work
};

const std::vector<PeakYear>& peak_years();

/// Export text holding exactly the peak-year references (Σ tcr of all peak
/// years) spread over citing records published 1953-2014.
std::string golden_peaks_export();

/// Export text with low-count references for every other year 1801-1965,
/// modern references 1966-2014 and a few undated references.
std::string golden_background_export();

/// Writes golden_peaks.txt and golden_background.txt into dir.
void write_golden_fixture(const std::string& dir);

/// Synthetic export with exactly n_refs cited references drawn from a
/// skewed pool of works with spelling variants; deterministic for a seed.
std::string synthetic_export(std::size_t n_refs, unsigned seed);

}  // namespace rpys::fixture

#endif
