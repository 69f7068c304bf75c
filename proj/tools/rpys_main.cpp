// rpys: reference publication year spectroscopy from tagged export files.
//
// Exit status: 0 success, 1 usage error, 2 input error, 3 output error.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpys/errors.hpp"
#include "rpys/pipeline.hpp"
#include "rpys/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string config_path;
  int from = 0;
  int to = 0;
  double threshold = 0.75;
  double min_deviation = 10.0;
  int top_n = 0;
  int k = 3;
  std::string out;
  std::string format = "csv";
  std::vector<int> years;
  bool quiet = false;

  CLI::Option* from_opt = nullptr;
  CLI::Option* to_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* min_dev_opt = nullptr;
  CLI::Option* top_n_opt = nullptr;
  CLI::Option* k_opt = nullptr;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("files", o.inputs, "Tagged export files")->required();
  cmd->add_option("--config", o.config_path, "JSON settings file; flags override it");
  o.from_opt = cmd->add_option("--from", o.from, "First reference publication year");
  o.to_opt = cmd->add_option("--to", o.to, "Last reference publication year");
  o.threshold_opt = cmd->add_option("--threshold", o.threshold, "Variant similarity threshold in [0,1]");
  o.min_dev_opt = cmd->add_option("--min-deviation", o.min_deviation, "Minimum peak deviation");
  o.top_n_opt = cmd->add_option("--top-n", o.top_n, "Keep only the n strongest peaks");
  o.k_opt = cmd->add_option("--k", o.k, "Top references listed per peak year");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--format", o.format, "csv or svg");
  cmd->add_flag("-q,--quiet", o.quiet, "Do not print parse warnings");
}

rpys::RunConfig resolve_config(const Options& o) {
  rpys::RunConfig cfg;
  if (!o.config_path.empty()) cfg = rpys::load_run_config(o.config_path);
  if (o.from_opt->count()) cfg.year_min = o.from;
  if (o.to_opt->count()) cfg.year_max = o.to;
  if (o.threshold_opt->count()) cfg.cluster.threshold = o.threshold;
  if (o.min_dev_opt->count()) cfg.peak_min_deviation = o.min_deviation;
  if (o.top_n_opt->count()) cfg.peak_top_n = o.top_n;
  if (o.k_opt->count()) cfg.top_k_refs = o.k;
  return cfg;
}

std::vector<fs::path> input_paths(const Options& o) {
  return {o.inputs.begin(), o.inputs.end()};
}

struct Loaded {
  rpys::CorpusLoad load;
  rpys::Analysis analysis;
};

Loaded load_and_analyze(const Options& o) {
  const auto cfg = resolve_config(o);
  Loaded l;
  try {
    l.load = rpys::load_corpus(input_paths(o));
  } catch (const rpys::InputError& e) {
    throw rpys::InputError(std::string("ingest: ") + e.what());
  }
  if (!o.quiet) {
    for (const auto& w : l.load.warnings) {
      std::cerr << w.file << ':' << w.line_number << ": " << rpys::to_string(w.kind) << ": "
                << w.detail << '\n';
    }
  }
  l.analysis = rpys::analyze(l.load.corpus, cfg, l.load.warnings.size());
  return l;
}

// Writes to <out>/<name> when --out is given, else to stdout.
template <typename Emit>
void deliver(const Options& o, const std::string& name, Emit emit) {
  if (o.out.empty()) {
    emit(std::cout, std::string("<stdout>"));
    return;
  }
  std::error_code ec;
  fs::create_directories(o.out, ec);
  const auto path = fs::path(o.out) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw rpys::OutputError("emit: cannot open '" + path.string() + "' for writing");
  emit(f, path.string());
  f.close();
  if (!f) throw rpys::OutputError("emit: write failed: " + path.string());
}

int run_ingest(const Options& o) {
  auto l = load_and_analyze(o);
  const auto& s = l.analysis.stats;
  nlohmann::json j = {
      {"n_records", s.n_records},
      {"n_cited_refs", s.n_cited_refs},
      {"pub_year_min", s.pub_year_min ? nlohmann::json(*s.pub_year_min) : nlohmann::json(nullptr)},
      {"pub_year_max", s.pub_year_max ? nlohmann::json(*s.pub_year_max) : nlohmann::json(nullptr)},
      {"warnings", l.load.warnings.size()},
  };
  deliver(o, "stats.json", [&](std::ostream& out, const std::string&) { out << j.dump(2) << '\n'; });
  return 0;
}

int run_spectrum(const Options& o) {
  const auto format = rpys::parse_grid_format(o.format);
  auto l = load_and_analyze(o);
  const auto& series = l.analysis.series;
  if (format == rpys::GridFormat::Csv) {
    deliver(o, "spectrum.csv", [&](std::ostream& out, const std::string& n) {
      rpys::emit_spectrum_csv(series, out, n);
    });
  } else {
    deliver(o, "spectrum.svg", [&](std::ostream& out, const std::string& n) {
      rpys::emit_spectrum_svg(series, series.year_min, series.year_max, out, n);
    });
  }
  return 0;
}

int run_heatmap(const Options& o) {
  const auto format = rpys::parse_grid_format(o.format);
  auto l = load_and_analyze(o);
  deliver(o, format == rpys::GridFormat::Csv ? "quantiles.csv" : "heatmap.svg",
          [&](std::ostream& out, const std::string& n) {
            rpys::emit_quantile_grid(l.analysis.series, out, format, n);
          });
  return 0;
}

int run_peaks(const Options& o) {
  auto l = load_and_analyze(o);
  deliver(o, "peaks.csv", [&](std::ostream& out, const std::string& n) {
    rpys::emit_peaks_csv(l.analysis.peaks, out, n);
  });
  return 0;
}

int run_topk(const Options& o) {
  auto l = load_and_analyze(o);
  auto& a = l.analysis;
  std::vector<rpys::Peak> rows;
  if (o.years.empty()) {
    rows = a.peaks;
  } else {
    for (const int y : o.years) {
      rpys::Peak p;
      p.year = y;
      p.count = a.series.count_at(y);
      if (const auto* pt = a.series.at(y)) {
        p.median = pt->median;
        p.deviation = pt->deviation;
      }
      p.top_clusters = rpys::top_refs_for_year(a.clusters, y, a.config.top_k_refs, a.series);
      rows.push_back(std::move(p));
    }
  }
  deliver(o, "top_refs.csv", [&](std::ostream& out, const std::string& n) {
    rpys::emit_top_refs_csv(rows, out, n);
  });
  return 0;
}

int run_report(const Options& o) {
  rpys::PipelineRequest req;
  req.inputs = input_paths(o);
  req.out_dir = o.out.empty() ? fs::path("rpys-report") : fs::path(o.out);
  req.config = resolve_config(o);
  const auto bundle = rpys::run_pipeline(req);

  std::ifstream peaks(bundle.peaks_csv);
  std::cout << "records: " << bundle.stats.n_records
            << "  cited references: " << bundle.stats.n_cited_refs << '\n'
            << "report written to " << req.out_dir.string() << '\n';
  std::string line;
  std::getline(peaks, line);  // header
  std::cout << "peak years:";
  while (std::getline(peaks, line)) std::cout << ' ' << line.substr(0, line.find(','));
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference publication year spectroscopy"};
  app.set_version_flag("--version", rpys::kVersion);
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Parse exports and print corpus statistics");
  auto* spectrum = app.add_subcommand("spectrum", "Per-year counts with median deviation");
  auto* heatmap = app.add_subcommand("heatmap", "Quantile table or heat map");
  auto* peaks = app.add_subcommand("peaks", "Detected peak years");
  auto* topk = app.add_subcommand("topk", "Most cited works in peak (or chosen) years");
  auto* report = app.add_subcommand("report", "Full pipeline into an output directory");

  // One option set per subcommand: "was this flag given" must be asked of
  // the subcommand that actually ran.
  using Runner = int (*)(const Options&);
  const std::array<std::pair<CLI::App*, Runner>, 6> commands = {{{ingest, run_ingest},
                                                                 {spectrum, run_spectrum},
                                                                 {heatmap, run_heatmap},
                                                                 {peaks, run_peaks},
                                                                 {topk, run_topk},
                                                                 {report, run_report}}};
  std::array<Options, 6> opts;
  for (std::size_t i = 0; i < commands.size(); ++i) add_common(commands[i].first, opts[i]);
  topk->add_option("--year", opts[4].years, "Year to list instead of the detected peaks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (*commands[i].first) return commands[i].second(opts[i]);
    }
  } catch (const rpys::UsageError& e) {
    std::cerr << "rpys: " << e.what() << '\n';
    return 1;
  } catch (const rpys::InputError& e) {
    std::cerr << "rpys: " << e.what() << '\n';
    return 2;
  } catch (const rpys::OutputError& e) {
    std::cerr << "rpys: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "rpys: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
