// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and
// expected values are pinned here rather than read from the library or
// the fixture generator.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cluster_oracle.hpp"
#include "golden_fixture.hpp"
#include "rpys/pipeline.hpp"
#include "rpys/report.hpp"
#include "series_oracle.hpp"
#include "test_support.hpp"

using namespace rpys;
using rpys::test::read_file;
using rpys::test::TempDir;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kGoldenSeconds = 5.0;
constexpr double kScaleSeconds = 10.0;
constexpr double kHazenRelTol = 1e-12;
constexpr double kMeanQuantileTol = 1e-12;
constexpr double kCsvRelTol = 5e-6;  // half a unit in the 6th significant digit
constexpr int kHazenSeries = 1000;
constexpr int kMedianSeries = 1000;
constexpr int kClusterInputs = 500;
constexpr std::size_t kScaleRefs = 100000;

struct Landmark {
  int year;
  long long tcr;
  long long top_tcr;
  const char* canonical;
};

const std::vector<Landmark> kLandmarks = {
    {1805, 23, 23, "Young T, 1805, PHILOS T R SOC LOND, V95, P65"},
    {1882, 82, 78, "Hertz H, 1882, J REINE ANGEW MATH, V92, P156"},
    {1886, 39, 34, "Reynolds O, 1886, PHILOS T R SOC LOND, V177, P157"},
    {1893, 24, 14, "Barus C, 1893, AM J SCI, V45, P87"},
    {1896, 25, 21, "Hertz H, 1896, MISCELLANEOUS PAPERS, P146"},
    {1909, 121, 102, "Stoney G G, 1909, P ROY SOC LOND A-CONTA, V82, P172"},
    {1929, 163, 107, "Tomlinson G A, 1929, PHILOS MAG, V7, P905"},
    {1948, 299, 72, "Savage R H, 1948, J APPL PHYS, V19, P1"},
    {1950, 579, 233, "Bowden F P, 1950, FRICTION LUBRICATION"},
    {1953, 968, 484, "Archard J F, 1953, J APPL PHYS, V24, P981"},
    {1959, 792, 128, "Archard J F, 1959, WEAR, V2, P438"},
};

// Thrown by expect(); the message becomes the FAIL detail.
struct Unmet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Unmet(what);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<fs::path> golden_inputs() {
  return {rpys::test::golden_path("golden_peaks.txt"), rpys::test::golden_path("golden_background.txt")};
}

// Minimal CSV reader for the emitted tables (quoted fields allowed).
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  return rows;
}

std::vector<long long> random_counts(std::mt19937& rng, std::size_t max_len) {
  std::vector<long long> c(1 + rng() % max_len);
  const long long spread = std::vector<long long>{3, 10, 1000, 1000000}[rng() % 4];
  for (auto& v : c) v = static_cast<long long>(rng() % static_cast<unsigned>(spread));
  return c;
}

RpySeries series_of(const std::vector<long long>& counts, int first_year) {
  std::vector<YearCount> yc;
  for (std::size_t i = 0; i < counts.size(); ++i) yc.push_back({first_year + static_cast<int>(i), counts[i]});
  return build_series(yc, first_year, first_year + static_cast<int>(counts.size()) - 1);
}

// ---------------------------------------------------------------------------

std::string criterion_golden() {
  expect(fixture::golden_peaks_export() == read_file(golden_inputs()[0]),
         "shipped golden_peaks.txt differs from the generator output");
  expect(fixture::golden_background_export() == read_file(golden_inputs()[1]),
         "shipped golden_background.txt differs from the generator output");

  TempDir tmp;
  const auto out_dir = tmp / "report";
  std::string cmd = std::string("\"") + RPYS_CLI + "\" report -q";
  for (const auto& p : golden_inputs()) cmd += " \"" + p.string() + "\"";
  cmd += " --from 1801 --to 1965 --out \"" + out_dir.string() + "\" >\"" + (tmp / "stdout").string() + "\"";
  const auto t0 = Clock::now();
  const int status = std::system(cmd.c_str());
  const double elapsed = seconds_since(t0);
  expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "report exited with status " + std::to_string(status));
  expect(elapsed < kGoldenSeconds, "report took " + fmt("%.2f", elapsed) + " s");

  std::string expected_line = "peak years:";
  for (const auto& l : kLandmarks) expected_line += " " + std::to_string(l.year);
  expect(read_file(tmp / "stdout").find(expected_line + "\n") != std::string::npos,
         "stdout lacks '" + expected_line + "'");

  const auto peaks = read_csv(read_file(out_dir / "peaks.csv"));
  expect(peaks.size() == kLandmarks.size() + 1, "peaks.csv has " + std::to_string(peaks.size() - 1) + " rows");
  for (std::size_t i = 0; i < kLandmarks.size(); ++i) {
    const auto& l = kLandmarks[i];
    expect(peaks[i + 1][0] == std::to_string(l.year), "peak row " + std::to_string(i) + " is " + peaks[i + 1][0]);
    expect(peaks[i + 1][1] == std::to_string(l.tcr),
           std::to_string(l.year) + " count " + peaks[i + 1][1] + " != " + std::to_string(l.tcr));
  }

  const auto top = read_csv(read_file(out_dir / "top_refs.csv"));
  std::map<int, std::vector<std::string>> first_rank;
  for (std::size_t r = 1; r < top.size(); ++r) {
    if (top[r][1] == "1") first_rank[std::stoi(top[r][0])] = top[r];
  }
  for (const auto& l : kLandmarks) {
    const auto it = first_rank.find(l.year);
    expect(it != first_rank.end(), "no top reference for " + std::to_string(l.year));
    const auto& row = it->second;
    const double share = static_cast<double>(l.top_tcr) / static_cast<double>(l.tcr);
    const std::string share_text = l.top_tcr == l.tcr ? "1" : fmt("%.6g", share);
    expect(row[2] == std::to_string(l.top_tcr), std::to_string(l.year) + " top tcr " + row[2]);
    expect(row[3] == share_text, std::to_string(l.year) + " share " + row[3] + " != " + share_text);
    expect(row[4] == l.canonical, std::to_string(l.year) + " canonical '" + row[4] + "'");
  }

  // in-memory shares are exact ratios of integers
  RunConfig cfg;
  cfg.year_min = 1801;
  cfg.year_max = 1965;
  const auto a = analyze(load_corpus(golden_inputs()).corpus, cfg);
  for (std::size_t i = 0; i < kLandmarks.size(); ++i) {
    const auto& l = kLandmarks[i];
    const auto& tc = a.peaks.at(i).top_clusters.at(0);
    expect(tc.share == static_cast<double>(l.top_tcr) / static_cast<double>(l.tcr),
           std::to_string(l.year) + " in-memory share inexact");
  }
  return "11 peak years, TCRs and shares exact; report " + fmt("%.2f", elapsed) + " s";
}

std::string criterion_hazen() {
  std::mt19937 rng(20150101);
  double worst = 0.0;
  for (int s = 0; s < kHazenSeries; ++s) {
    const auto counts = random_counts(rng, 50);
    const auto series = series_of(counts, 1700 + static_cast<int>(rng() % 300));
    const auto q = rpys::test::oracle_quantiles(counts);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double rel = std::fabs(series.points[i].quantile - q[i]) / std::fabs(q[i]);
      worst = std::max(worst, rel);
      expect(rel <= kHazenRelTol, "series " + std::to_string(s) + " relative error " + fmt("%.3g", rel));
    }
  }
  double worst_mean = 0.0;
  for (int s = 0; s < kHazenSeries; ++s) {
    std::set<long long> distinct;
    const auto n = 1 + rng() % 50;
    while (distinct.size() < n) distinct.insert(static_cast<long long>(rng() % 100000));
    std::vector<long long> counts(distinct.begin(), distinct.end());
    std::shuffle(counts.begin(), counts.end(), rng);
    const auto series = series_of(counts, 1900);
    double sum = 0.0;
    for (const auto& p : series.points) sum += p.quantile;
    const double dev = std::fabs(sum / static_cast<double>(n) - 50.0);
    worst_mean = std::max(worst_mean, dev);
    expect(dev <= kMeanQuantileTol, "distinct series " + std::to_string(s) + " mean off by " + fmt("%.3g", dev));
  }
  return std::to_string(kHazenSeries) + " series, max rel err " + fmt("%.3g", worst) + "; mean-50 max dev " +
         fmt("%.3g", worst_mean);
}

std::string criterion_median() {
  std::mt19937 rng(5);
  std::size_t points = 0;
  for (int s = 0; s < kMedianSeries; ++s) {
    const auto counts = random_counts(rng, 50);
    const auto series = series_of(counts, 1800 + static_cast<int>(rng() % 200));
    const auto m = rpys::test::oracle_medians(counts);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto& p = series.points[i];
      expect(p.median == m[i] && p.deviation == static_cast<double>(counts[i]) - m[i],
             "series " + std::to_string(s) + " year index " + std::to_string(i) + ": m=" + fmt("%.17g", p.median) +
                 " oracle " + fmt("%.17g", m[i]));
      ++points;
    }
  }
  return std::to_string(kMedianSeries) + " series, " + std::to_string(points) + " points exact";
}

// Order-insensitive description of a clustering: each cluster as its
// sorted member raws, plus canonical raw and tcr.
std::set<std::tuple<std::vector<std::string>, std::string, long long>> shape(const std::vector<RefCluster>& cs) {
  std::set<std::tuple<std::vector<std::string>, std::string, long long>> out;
  for (const auto& c : cs) {
    std::vector<std::string> raws;
    for (const auto& m : c.members) raws.push_back(m.ref.raw);
    std::sort(raws.begin(), raws.end());
    out.emplace(std::move(raws), c.canonical.raw, c.tcr);
  }
  return out;
}

std::string criterion_cluster() {
  std::mt19937 rng(1953);
  for (int trial = 0; trial < kClusterInputs; ++trial) {
    const auto refs = rpys::test::random_weighted_refs(rng);
    const double t = static_cast<double>(rng() % 101) / 100.0;
    const std::string where = "input " + std::to_string(trial) + " t=" + fmt("%.2f", t);
    const auto clusters = cluster_refs(refs, {t, true});

    long long in = 0, out = 0;
    for (const auto& r : refs) in += r.count;
    std::size_t members = 0;
    for (const auto& c : clusters) {
      out += c.tcr;
      members += c.members.size();
    }
    expect(in == out && members == refs.size(), where + ": tcr not conserved");
    expect(rpys::test::cluster_partition(refs, clusters) == rpys::test::oracle_partition(refs, t),
           where + ": differs from brute-force components");

    // idempotence: canonicals weighted by tcr form singleton clusters again
    std::vector<WeightedRef> reps;
    for (const auto& c : clusters) reps.push_back({c.canonical, c.tcr});
    const auto again = cluster_refs(reps, {t, true});
    expect(again.size() == clusters.size(), where + ": re-clustering merged clusters");
    for (std::size_t i = 0; i < again.size(); ++i) {
      expect(again[i].canonical == clusters[i].canonical && again[i].tcr == clusters[i].tcr,
             where + ": re-clustering changed cluster " + std::to_string(i));
    }

    // monotonicity: a higher threshold refines the partition
    const double t2 = t + (1.0 - t) * static_cast<double>(rng() % 101) / 100.0;
    std::map<std::string, long long> coarse_of;
    for (const auto& c : clusters) {
      for (const auto& m : c.members) coarse_of[m.ref.raw] = c.cluster_id;
    }
    for (const auto& c : cluster_refs(refs, {t2, true})) {
      for (const auto& m : c.members) {
        expect(coarse_of.at(m.ref.raw) == coarse_of.at(c.members.front().ref.raw),
               where + ": threshold " + fmt("%.2f", t2) + " is not a refinement");
      }
    }

    // permutation invariance: identical output, ids included
    auto shuffled = refs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    expect(cluster_refs(shuffled, {t, true}) == clusters, where + ": output depends on input order");

    // threshold 1.0 is exact-key grouping
    std::map<std::pair<std::optional<int>, std::string>, std::vector<std::string>> by_key;
    for (const auto& r : refs) by_key[{r.ref.rpy, normalize_key(r.ref).key}].push_back(r.ref.raw);
    std::set<std::vector<std::string>> expected;
    for (auto& [k, v] : by_key) {
      std::sort(v.begin(), v.end());
      expected.insert(v);
    }
    std::set<std::vector<std::string>> got;
    for (const auto& [raws, canon, tcr] : shape(cluster_refs(refs, {1.0, true}))) got.insert(raws);
    expect(got == expected, "input " + std::to_string(trial) + ": threshold 1.0 differs from exact-key groups");
  }
  return std::to_string(kClusterInputs) + " inputs: conservation, idempotence, monotonicity, permutation, exact keys";
}

std::string criterion_parser() {
  const auto path = rpys::test::data_path("sample_export.txt");
  const auto text = read_file(path);
  const auto r = parse_wos_export(std::string_view(text), "sample_export.txt");

  const std::vector<BiblioRecord> expected = {
      {"WOS:000000000000001",
       2015,
       {"Young T, 1805, PHILOS T R SOC LOND, V95, P65", "Hertz H, 1882, J REINE ANGEW MATH, V92, P156",
        "Archard J F, 1953, J APPL PHYS, V24, P981"},
       "Article"},
      {"WOS:000000000000002",
       2014,
       {"Reynolds O, 1886, PHILOS T R SOC LOND, V177, P157", "Bowden F P, 1950, FRICTION LUBRICATION"},
       "Article"},
      {"sample_export.txt:3", std::nullopt, {"Barus C, 1893, AM J SCI, V45, P87"}, "Review"},
      {"WOS:000000000000004", 1999, {"Stoney G G, 1909, P ROY SOC LOND A-CONTA, V82, P172"}, std::nullopt},
      {"WOS:000000000000005", std::nullopt, {}, std::nullopt},
  };
  expect(r.records.size() == expected.size(), std::to_string(r.records.size()) + " records parsed");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expect(r.records[i] == expected[i], "record " + std::to_string(i + 1) + " differs");
  }

  const std::vector<std::pair<WarningKind, std::size_t>> expected_warnings = {
      {WarningKind::UnknownTag, 31}, {WarningKind::BadYear, 36}, {WarningKind::MissingTerminator, 44}};
  expect(r.warnings.size() == expected_warnings.size(), std::to_string(r.warnings.size()) + " warnings");
  for (std::size_t i = 0; i < expected_warnings.size(); ++i) {
    expect(r.warnings[i].kind == expected_warnings[i].first && r.warnings[i].line_number == expected_warnings[i].second,
           "warning " + std::to_string(i) + " is " + std::string(to_string(r.warnings[i].kind)) + " at line " +
               std::to_string(r.warnings[i].line_number));
  }

  std::size_t parsed = 0;
  for (const auto& rec : r.records) parsed += rec.cited_refs.size();
  const auto oracle = rpys::test::count_cr_lines(text);
  expect(parsed == oracle, "parsed " + std::to_string(parsed) + " refs, line oracle " + std::to_string(oracle));

  std::size_t golden_parsed = 0, golden_oracle = 0;
  for (const auto& p : golden_inputs()) {
    const auto g = read_file(p);
    for (const auto& rec : parse_wos_export(std::string_view(g), p.filename().string()).records) {
      golden_parsed += rec.cited_refs.size();
    }
    golden_oracle += rpys::test::count_cr_lines(g);
  }
  expect(golden_parsed == golden_oracle, "golden corpus: parsed " + std::to_string(golden_parsed) +
                                             ", oracle " + std::to_string(golden_oracle));
  return "5 records, 3 warnings as expected; CR lines " + std::to_string(parsed) + " + " +
         std::to_string(golden_parsed) + " match the line oracle";
}

std::string criterion_emitters() {
  TempDir tmp;
  PipelineRequest req;
  req.inputs = golden_inputs();
  req.config.year_min = 1801;
  req.config.year_max = 1965;
  req.out_dir = tmp / "a";
  const auto a = run_pipeline(req);
  req.out_dir = tmp / "b";
  run_pipeline(req);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(tmp / "a")) {
    const auto name = entry.path().filename();
    expect(read_file(entry.path()) == read_file(tmp / "b" / name), name.string() + " differs between runs");
    ++files;
  }
  expect(files == 7, std::to_string(files) + " artifacts written");

  const auto analysis = analyze(load_corpus(golden_inputs()).corpus, req.config);
  const auto& pts = analysis.series.points;
  const auto close = [](const std::string& text, double v) {
    return std::fabs(std::stod(text) - v) <= kCsvRelTol * std::fabs(v);
  };
  const auto spectrum = read_csv(read_file(a.spectrum_csv));
  const auto quant = read_csv(read_file(a.quantiles_csv));
  expect(spectrum.size() == pts.size() + 1 && quant.size() == pts.size() + 1, "row count mismatch");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& s = spectrum[i + 1];
    const auto& q = quant[i + 1];
    const auto& p = pts[i];
    expect(std::stoi(s[0]) == p.year && std::stoll(s[1]) == p.count && close(s[2], p.median) &&
               close(s[3], p.deviation),
           "spectrum row " + std::to_string(p.year) + " does not round-trip");
    expect(std::stoi(q[0]) == p.year && std::stoll(q[1]) == p.count && close(q[2], p.rank) &&
               close(q[3], p.quantile),
           "quantile row " + std::to_string(p.year) + " does not round-trip");
  }
  return "7 artifacts byte-identical; " + std::to_string(pts.size()) + " rows round-trip within " +
         fmt("%.0e", kCsvRelTol);
}

std::string criterion_scale() {
  TempDir tmp;
  const auto input = tmp / "synthetic.txt";
  rpys::test::write_file(input, fixture::synthetic_export(kScaleRefs, 100000));

  PipelineRequest req;
  req.inputs = {input};
  req.out_dir = tmp / "out";
  const auto t0 = Clock::now();
  const auto bundle = run_pipeline(req);
  const double elapsed = seconds_since(t0);
  expect(bundle.stats.n_cited_refs == kScaleRefs, std::to_string(bundle.stats.n_cited_refs) + " refs ingested");
  expect(elapsed < kScaleSeconds, "took " + fmt("%.2f", elapsed) + " s");
  return std::to_string(kScaleRefs) + " refs ingested, analysed and emitted in " + fmt("%.2f", elapsed) + " s";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"golden-fixture peak recovery", criterion_golden},
      {"Hazen quantile oracle", criterion_hazen},
      {"median-deviation oracle", criterion_median},
      {"clustering properties", criterion_cluster},
      {"parser conformance", criterion_parser},
      {"emitter determinism", criterion_emitters},
      {"scale check", criterion_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict, detail;
    try {
      detail = criteria[i].second();
      verdict = "PASS";
    } catch (const std::exception& e) {
      detail = e.what();
      verdict = "FAIL";
      ++failed;
    }
    std::cout << verdict << " [" << i + 1 << "] " << criteria[i].first << ": " << detail << std::endl;
  }
  return failed ? 1 : 0;
}
