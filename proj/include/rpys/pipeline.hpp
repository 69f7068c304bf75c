#ifndef RPYS_PIPELINE_HPP
#define RPYS_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rpys/ref_cluster.hpp"
#include "rpys/spectroscopy.hpp"
#include "rpys/wos_ingest.hpp"

namespace rpys {

inline constexpr const char* kVersion = "0.1.0";

// Year range used when neither the caller nor the data supplies one.
inline constexpr int kFallbackYearMin = 1900;
inline constexpr int kFallbackYearMax = 2000;

/// User-facing settings; unset years default to the observed RPY range.
struct RunConfig {
  std::optional<int> year_min;
  std::optional<int> year_max;
  double peak_min_deviation = 10.0;
  std::optional<int> peak_top_n;
  int top_k_refs = 3;
  ClusterConfig cluster;
};

/// Reads a JSON object with any of the keys year_min, year_max,
/// peak_min_deviation, peak_top_n, top_k_refs, threshold. Unknown keys and
/// wrongly typed values are UsageErrors; an unreadable file is an InputError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Distinct raw reference strings of the corpus with their occurrence
/// counts, parsed, in raw-string order.
std::vector<WeightedRef> tally_refs(const Corpus& corpus);

struct Analysis {
  AnalysisConfig config;
  ClusterConfig cluster;
  CorpusStats stats;
  std::size_t warning_count = 0;
  std::size_t undated_refs = 0;  // occurrences without a usable RPY
  std::vector<RefCluster> clusters;
  RpySeries series;
  std::vector<Peak> peaks;  // top clusters attached
};

/// Parse, cluster and compute the spectrum for an already loaded corpus.
/// Only references inside the resolved year range are clustered.
Analysis analyze(const Corpus& corpus, const RunConfig& config, std::size_t warning_count = 0);

struct ReportBundle {
  std::filesystem::path spectrum_csv;
  std::filesystem::path quantiles_csv;
  std::filesystem::path peaks_csv;
  std::filesystem::path top_refs_csv;
  std::optional<std::filesystem::path> spectrum_svg;
  std::optional<std::filesystem::path> heatmap_svg;
  std::filesystem::path manifest;
  CorpusStats stats;
};

struct PipelineRequest {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out_dir;
  RunConfig config;
  bool write_svg = true;
};

/// ingest -> parse -> cluster -> spectroscopy -> emit. Errors carry the
/// failing stage name; files written before a failure are removed.
ReportBundle run_pipeline(const PipelineRequest& request);

/// Manifest content: {config, stats, warnings, version}.
std::string manifest_json(const Analysis& analysis, const std::vector<std::string>& inputs);

}  // namespace rpys

#endif
