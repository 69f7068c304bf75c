#include "rpys/pipeline.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "rpys/errors.hpp"
#include "rpys/report.hpp"

namespace rpys {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T json_get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: key '") + key + "' has the wrong type");
  }
}

// Writes one artifact; remembers it so a later failure can remove it.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  ~ArtifactWriter() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  fs::path write(const std::string& name, const std::function<void(std::ostream&, const std::string&)>& emit) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("emit: cannot open '" + path.string() + "' for writing");
    written_.push_back(path);  // only files we actually opened are ours to remove
    try {
      emit(out, path.string());
    } catch (const OutputError& e) {
      throw OutputError(std::string("emit: ") + e.what());
    }
    out.close();
    if (!out) throw OutputError("emit: write failed: " + path.string());
    return path;
  }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config: '" + path.string() + "' must hold a JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "year_min") {
      cfg.year_min = json_get<int>(j, "year_min");
    } else if (key == "year_max") {
      cfg.year_max = json_get<int>(j, "year_max");
    } else if (key == "peak_min_deviation") {
      cfg.peak_min_deviation = json_get<double>(j, "peak_min_deviation");
    } else if (key == "peak_top_n") {
      if (!value.is_null()) cfg.peak_top_n = json_get<int>(j, "peak_top_n");
    } else if (key == "top_k_refs") {
      cfg.top_k_refs = json_get<int>(j, "top_k_refs");
    } else if (key == "threshold") {
      cfg.cluster.threshold = json_get<double>(j, "threshold");
    } else if (key == "block_by_year") {
      if (!json_get<bool>(j, "block_by_year")) {
        throw UsageError("config: block_by_year cannot be disabled");
      }
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

std::vector<WeightedRef> tally_refs(const Corpus& corpus) {
  std::map<std::string_view, long long> counts;
  for (const auto& rec : corpus.records) {
    for (const auto& raw : rec.cited_refs) ++counts[raw];
  }
  std::vector<WeightedRef> out;
  out.reserve(counts.size());
  for (const auto& [raw, n] : counts) out.push_back({parse_cited_ref(raw), n});
  return out;
}

Analysis analyze(const Corpus& corpus, const RunConfig& config, std::size_t warning_count) {
  Analysis a;
  a.stats = corpus_stats(corpus);
  a.warning_count = warning_count;
  a.cluster = config.cluster;

  auto tallies = tally_refs(corpus);
  std::optional<int> seen_lo;
  std::optional<int> seen_hi;
  for (const auto& t : tallies) {
    if (!t.ref.rpy) {
      a.undated_refs += static_cast<std::size_t>(t.count);
      continue;
    }
    const int y = *t.ref.rpy;
    if (!seen_lo || y < *seen_lo) seen_lo = y;
    if (!seen_hi || y > *seen_hi) seen_hi = y;
  }

  auto& cfg = a.config;
  cfg.year_min = config.year_min.value_or(seen_lo.value_or(kFallbackYearMin));
  cfg.year_max = config.year_max.value_or(seen_hi.value_or(kFallbackYearMax));
  // A one-sided bound outside the data still yields a non-empty range.
  if (!config.year_max && config.year_min && cfg.year_max < cfg.year_min) cfg.year_max = cfg.year_min;
  if (!config.year_min && config.year_max && cfg.year_min > cfg.year_max) cfg.year_min = cfg.year_max;
  cfg.peak_min_deviation = config.peak_min_deviation;
  cfg.peak_top_n = config.peak_top_n;
  cfg.top_k_refs = config.top_k_refs;
  try {
    cfg.validate();
    if (!(config.cluster.threshold >= 0.0 && config.cluster.threshold <= 1.0)) {
      throw std::invalid_argument("threshold must lie in [0, 1]");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("analyze: ") + e.what());
  }

  std::vector<WeightedRef> in_range;
  std::vector<YearCount> years;
  for (auto& t : tallies) {
    if (const auto y = extract_valid_rpy(t.ref, cfg.year_min, cfg.year_max)) {
      years.push_back({*y, t.count});
      in_range.push_back(std::move(t));
    }
  }

  a.series = build_series(years, cfg.year_min, cfg.year_max);
  a.clusters = cluster_refs(in_range, config.cluster);
  a.peaks = detect_peaks(a.series, cfg);
  for (auto& p : a.peaks) {
    p.top_clusters = top_refs_for_year(a.clusters, p.year, cfg.top_k_refs, a.series);
  }
  return a;
}

std::string manifest_json(const Analysis& a, const std::vector<std::string>& inputs) {
  json config = {
      {"year_min", a.config.year_min},
      {"year_max", a.config.year_max},
      {"peak_min_deviation", a.config.peak_min_deviation},
      {"peak_top_n", a.config.peak_top_n ? json(*a.config.peak_top_n) : json(nullptr)},
      {"top_k_refs", a.config.top_k_refs},
      {"threshold", a.cluster.threshold},
      {"block_by_year", a.cluster.block_by_year},
      {"inputs", inputs},
  };
  json stats = {
      {"n_records", a.stats.n_records},
      {"n_cited_refs", a.stats.n_cited_refs},
      {"pub_year_min", a.stats.pub_year_min ? json(*a.stats.pub_year_min) : json(nullptr)},
      {"pub_year_max", a.stats.pub_year_max ? json(*a.stats.pub_year_max) : json(nullptr)},
      {"undated_refs", a.undated_refs},
      {"n_clusters", a.clusters.size()},
      {"n_peaks", a.peaks.size()},
  };
  json m = {{"config", config}, {"stats", stats}, {"warnings", a.warning_count}, {"version", kVersion}};
  return m.dump(2) + "\n";
}

ReportBundle run_pipeline(const PipelineRequest& request) {
  CorpusLoad load;
  try {
    load = load_corpus(request.inputs);
  } catch (const InputError& e) {
    throw InputError(std::string("ingest: ") + e.what());
  }

  const auto analysis = analyze(load.corpus, request.config, load.warnings.size());

  std::error_code ec;
  fs::create_directories(request.out_dir, ec);
  if (ec || !fs::is_directory(request.out_dir)) {
    throw OutputError("emit: cannot create output directory '" + request.out_dir.string() + "'");
  }

  ReportBundle bundle;
  bundle.stats = analysis.stats;
  ArtifactWriter writer(request.out_dir);
  const auto& series = analysis.series;
  bundle.spectrum_csv = writer.write("spectrum.csv", [&](std::ostream& o, const std::string& n) {
    emit_spectrum_csv(series, o, n);
  });
  bundle.quantiles_csv = writer.write("quantiles.csv", [&](std::ostream& o, const std::string& n) {
    emit_quantile_grid(series, o, GridFormat::Csv, n);
  });
  bundle.peaks_csv = writer.write("peaks.csv", [&](std::ostream& o, const std::string& n) {
    emit_peaks_csv(analysis.peaks, o, n);
  });
  bundle.top_refs_csv = writer.write("top_refs.csv", [&](std::ostream& o, const std::string& n) {
    emit_top_refs_csv(analysis.peaks, o, n);
  });
  if (request.write_svg) {
    bundle.spectrum_svg = writer.write("spectrum.svg", [&](std::ostream& o, const std::string& n) {
      emit_spectrum_svg(series, series.year_min, series.year_max, o, n);
    });
    bundle.heatmap_svg = writer.write("heatmap.svg", [&](std::ostream& o, const std::string& n) {
      emit_quantile_grid(series, o, GridFormat::Svg, n);
    });
  }
  bundle.manifest = writer.write("manifest.json", [&](std::ostream& o, const std::string&) {
    o << manifest_json(analysis, load.corpus.provenance);
  });
  writer.commit();
  return bundle;
}

}  // namespace rpys
