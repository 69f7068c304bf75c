#include "rpys/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rpys/errors.hpp"

namespace rpys {

namespace {

void check_sink(const std::ostream& sink, const std::string& name) {
  if (!sink) throw OutputError("write failed: " + name);
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string gray_hex(int level) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
  return buf;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", value);
  }
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

GridFormat parse_grid_format(std::string_view name) {
  if (name == "csv") return GridFormat::Csv;
  if (name == "svg") return GridFormat::Svg;
  throw UsageError("unknown format '" + std::string(name) + "' (expected csv or svg)");
}

std::size_t emit_spectrum_csv(const RpySeries& series, std::ostream& sink,
                              const std::string& sink_name) {
  sink << "year,count,median5,deviation\n";
  for (const auto& p : series.points) {
    sink << p.year << ',' << p.count << ',' << format_real(p.median) << ','
         << format_real(p.deviation) << '\n';
  }
  sink.flush();
  check_sink(sink, sink_name);
  return series.points.size();
}

std::size_t emit_quantile_grid(const RpySeries& series, std::ostream& sink, GridFormat format,
                               const std::string& sink_name, int band_width) {
  if (band_width < 1) throw UsageError("heat map band width must be >= 1");
  if (format == GridFormat::Csv) {
    sink << "year,count,rank,quantile\n";
    for (const auto& p : series.points) {
      sink << p.year << ',' << p.count << ',' << format_real(p.rank) << ','
           << format_real(p.quantile) << '\n';
    }
    sink.flush();
    check_sink(sink, sink_name);
    return series.points.size();
  }

  constexpr int kCellW = 36;
  constexpr int kCellH = 20;
  constexpr int kMargin = 10;
  const auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const int base = floor_div(series.year_min, band_width) * band_width;
  const int rows = series.points.empty()
                       ? 0
                       : floor_div(series.year_max - base, band_width) + 1;
  const int width = 2 * kMargin + band_width * kCellW;
  const int height = 2 * kMargin + rows * kCellH;

  sink << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  sink << "<g font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">\n";
  std::size_t cells = 0;
  for (const auto& p : series.points) {
    const int offset = p.year - base;
    const int x = kMargin + (offset % band_width) * kCellW;
    const int y = kMargin + (offset / band_width) * kCellH;
    const double q = std::clamp(p.quantile, 0.0, 100.0);
    const int level = static_cast<int>(std::lround(255.0 * (1.0 - q / 100.0)));
    sink << "<rect class=\"cell\" data-year=\"" << p.year << "\" data-quantile=\""
         << format_real(p.quantile) << "\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
         << "\" height=\"" << kCellH << "\" fill=\"" << gray_hex(level) << "\"/>\n";
    ++cells;
    if (p.year % 10 == 0) {
      sink << "<text class=\"label\" x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 3
           << "\" fill=\"" << (level < 128 ? "#ffffff" : "#000000") << "\">" << p.year
           << "</text>\n";
    }
  }
  sink << "</g>\n</svg>\n";
  sink.flush();
  check_sink(sink, sink_name);
  return cells;
}

void emit_spectrum_svg(const RpySeries& series, int from, int to, std::ostream& sink,
                       const std::string& sink_name) {
  const int lo_year = std::max(from, series.year_min);
  const int hi_year = std::min(to, series.year_max);
  if (series.points.empty() || lo_year > hi_year) {
    throw UsageError("spectrum range " + std::to_string(from) + "-" + std::to_string(to) +
                     " selects no years");
  }

  constexpr double kWidth = 800;
  constexpr double kHeight = 400;
  constexpr double kLeft = 60;
  constexpr double kRight = 20;
  constexpr double kTop = 20;
  constexpr double kBottom = 40;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double v_lo = 0.0;
  double v_hi = 0.0;
  for (int y = lo_year; y <= hi_year; ++y) {
    const auto* p = series.at(y);
    v_lo = std::min({v_lo, static_cast<double>(p->count), p->deviation});
    v_hi = std::max({v_hi, static_cast<double>(p->count), p->deviation});
  }
  if (v_hi == v_lo) v_hi = v_lo + 1.0;

  const auto x_of = [&](int year) {
    if (hi_year == lo_year) return kLeft + plot_w / 2.0;
    return kLeft + plot_w * static_cast<double>(year - lo_year) / static_cast<double>(hi_year - lo_year);
  };
  const auto y_of = [&](double v) { return kTop + plot_h * (v_hi - v) / (v_hi - v_lo); };

  sink << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
          "viewBox=\"0 0 800 400\">\n";
  sink << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  const double y0 = y_of(0.0);
  sink << "<line class=\"baseline\" x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(y0)
       << "\" x2=\"" << fixed2(kLeft + plot_w) << "\" y2=\"" << fixed2(y0)
       << "\" stroke=\"#888888\"/>\n";
  sink << "<line class=\"axis\" x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop) << "\" x2=\""
       << fixed2(kLeft) << "\" y2=\"" << fixed2(kTop + plot_h) << "\" stroke=\"#000000\"/>\n";
  sink << "<text class=\"ylabel\" x=\"" << fixed2(kLeft - 4) << "\" y=\"" << fixed2(kTop + 4)
       << "\" text-anchor=\"end\">" << format_real(v_hi) << "</text>\n";
  sink << "<text class=\"ylabel\" x=\"" << fixed2(kLeft - 4) << "\" y=\""
       << fixed2(kTop + plot_h + 4) << "\" text-anchor=\"end\">" << format_real(v_lo)
       << "</text>\n";
  for (int y = lo_year; y <= hi_year; ++y) {
    if (y % 10 != 0 && !(y == lo_year && hi_year - lo_year < 10)) continue;
    sink << "<text class=\"tick\" x=\"" << fixed2(x_of(y)) << "\" y=\""
         << fixed2(kTop + plot_h + 16) << "\" text-anchor=\"middle\">" << y << "</text>\n";
  }

  const auto polyline = [&](const char* cls, const char* colour, auto value_of) {
    sink << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour
         << "\" points=\"";
    for (int y = lo_year; y <= hi_year; ++y) {
      if (y != lo_year) sink << ' ';
      sink << fixed2(x_of(y)) << ',' << fixed2(y_of(value_of(*series.at(y))));
    }
    sink << "\"/>\n";
  };
  polyline("count", "#000000", [](const RpyPoint& p) { return static_cast<double>(p.count); });
  polyline("deviation", "#cc0000", [](const RpyPoint& p) { return p.deviation; });
  sink << "</g>\n</svg>\n";
  sink.flush();
  check_sink(sink, sink_name);
}

std::size_t emit_peaks_csv(const std::vector<Peak>& peaks, std::ostream& sink,
                           const std::string& sink_name) {
  sink << "year,count,median5,deviation\n";
  for (const auto& p : peaks) {
    sink << p.year << ',' << p.count << ',' << format_real(p.median) << ','
         << format_real(p.deviation) << '\n';
  }
  sink.flush();
  check_sink(sink, sink_name);
  return peaks.size();
}

std::size_t emit_top_refs_csv(const std::vector<Peak>& peaks, std::ostream& sink,
                              const std::string& sink_name) {
  sink << "year,rank,tcr,share,canonical_ref\n";
  std::size_t rows = 0;
  for (const auto& p : peaks) {
    for (std::size_t r = 0; r < p.top_clusters.size(); ++r) {
      const auto& rc = p.top_clusters[r];
      sink << p.year << ',' << r + 1 << ',' << rc.cluster.tcr << ',' << format_real(rc.share) << ','
           << csv_field(rc.cluster.canonical.raw) << '\n';
      ++rows;
    }
  }
  sink.flush();
  check_sink(sink, sink_name);
  return rows;
}

}  // namespace rpys
