#ifndef RPYS_REPORT_HPP
#define RPYS_REPORT_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rpys/spectroscopy.hpp"

namespace rpys {

// CSV/SVG emitters. Every emitter is byte-deterministic for a fixed input,
// writes LF line endings and throws OutputError naming the sink when the
// stream fails.

/// Integral values print without a fraction; others with up to 6
/// significant digits.
std::string format_real(double value);

/// Quotes a field containing a comma, quote or newline.
std::string csv_field(std::string_view text);

enum class GridFormat { Csv, Svg };

/// "csv" or "svg"; anything else is a UsageError.
GridFormat parse_grid_format(std::string_view name);

/// year,count,median5,deviation. Returns the number of data rows.
std::size_t emit_spectrum_csv(const RpySeries& series, std::ostream& sink,
                              const std::string& sink_name = "<stream>");

/// csv: year,count,rank,quantile. svg: one cell per year, band_width years
/// per row, fill gray running linearly from white (quantile 0) to black
/// (quantile 100), labels on decade years. Returns rows (csv) or cells (svg).
std::size_t emit_quantile_grid(const RpySeries& series, std::ostream& sink, GridFormat format,
                               const std::string& sink_name = "<stream>", int band_width = 10);

/// Count and deviation polylines over [from, to] intersected with the
/// series range; an empty intersection is a UsageError.
void emit_spectrum_svg(const RpySeries& series, int from, int to, std::ostream& sink,
                       const std::string& sink_name = "<stream>");

std::size_t emit_peaks_csv(const std::vector<Peak>& peaks, std::ostream& sink,
                           const std::string& sink_name = "<stream>");

/// year,rank,tcr,share,canonical_ref with one row per peak cluster.
std::size_t emit_top_refs_csv(const std::vector<Peak>& peaks, std::ostream& sink,
                              const std::string& sink_name = "<stream>");

}  // namespace rpys

#endif
