#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphembed/analysis.hpp"
#include "graphembed/centrality.hpp"
#include "graphembed/classify.hpp"
#include "graphembed/eigenmaps.hpp"
#include "graphembed/embedding.hpp"
#include "graphembed/graph.hpp"
#include "graphembed/line.hpp"
#include "graphembed/node2vec.hpp"

namespace graphembed {

/// Algorithms the pipeline knows: eigenmaps, line1, line2, node2vec.
const std::vector<std::string>& known_algorithms();

struct PipelineConfig {
  std::string dataset = "dataset";
  std::filesystem::path edges_path;
  std::filesystem::path labels_path;
  /// Directedness of the edge file.
  bool directed_input = false;
  /// Drop edge directions after ingestion.
  bool make_undirected = false;
  bool accumulate_weights = false;

  std::vector<std::string> algorithms{"eigenmaps", "line1", "line2", "node2vec"};
  /// Empty means every measure that applies to the graph.
  std::vector<Measure> measures;
  HyperGrid grid;
  /// p and q axes searched for node2vec only.
  std::vector<double> node2vec_p{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> node2vec_q{0.25, 0.5, 1.0, 2.0, 4.0};

  LineConfig line;
  /// LINE edge samples per edge when line.total_samples is 0.
  std::uint64_t line_samples_per_edge = 100;
  WalkConfig walk;
  EigenmapsOptions eigenmaps;
  PageRankParams pagerank;
  CvOptions cv;
  BinningOptions binning;

  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::filesystem::path output_dir = "out";
  std::filesystem::path cache_dir = ".graphembed-cache";
  /// Algorithms whose unsupported/resource failures do not fail the run.
  std::vector<std::string> skippable;

  /// Reads a JSON config; relative paths resolve against `base`.
  static PipelineConfig from_json_text(const std::string& text, const std::filesystem::path& base = {});
  static PipelineConfig load(const std::filesystem::path& path);
  /// Canonical JSON of every field that affects results (paths to outputs excluded).
  std::string canonical_json() const;
  std::string hash() const;
  /// Throws ContractViolation for missing inputs or inconsistent settings.
  void validate() const;
  /// Grid actually searched for one algorithm.
  HyperGrid grid_for(const std::string& algorithm) const;
};

enum class StageStatus { Computed, Cached, SkippedUnsupported, SkippedResource, Failed };
std::string_view stage_status_name(StageStatus s);

struct StageRecord {
  std::string name;
  StageStatus status = StageStatus::Computed;
  std::string key;
  double seconds = 0.0;
  std::string reason;
};

struct Manifest {
  std::string config_hash;
  std::string dataset;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
  /// Artifact path (relative to the output or cache root) -> SHA-256.
  std::map<std::string, std::string> artifacts;

  std::size_t recomputed() const;
  /// SHA-256 over the sorted artifact lines; equal for identical results.
  std::string artifacts_digest() const;
  bool succeeded(const std::vector<std::string>& skippable) const;
  std::string to_text() const;
};

/// Orchestrates ingest -> centrality -> embed -> classify -> analyze with artifacts cached
/// under content keys, so a rerun with an unchanged config recomputes nothing and a
/// changed field invalidates exactly the stages that depend on it.
class Pipeline {
public:
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig& config() const noexcept { return config_; }

  /// Loads or builds the graph and labels. `compute` false requires a cached result.
  StageRecord ingest(bool compute = true);
  StageRecord centrality(Measure m, bool compute = true);
  /// One embedding for one grid point.
  StageRecord embed(const std::string& algorithm, const EmbeddingParams& params, bool compute = true);
  /// Nested CV for one algorithm; with `compute_embeddings` false every embedding of the
  /// grid must already be cached.
  StageRecord classify(const std::string& algorithm, bool compute_embeddings = true);
  StageRecord analyze(const std::string& algorithm, Measure m, bool compute = true);

  /// Every stage for every configured algorithm and measure; writes the manifest.
  Manifest run();

  const Graph& graph() const;
  const LabelTable& labels() const;
  CentralityScores scores(Measure m) const;
  EmbeddingMatrix embedding(const std::string& algorithm, const EmbeddingParams& params) const;
  EvalReport report(const std::string& algorithm) const;
  std::vector<PowerLawSeries> series(const std::string& algorithm, Measure m) const;

  std::vector<Measure> measures() const;
  const Manifest& manifest() const noexcept { return manifest_; }

  std::filesystem::path embedding_path(const std::string& algorithm, const EmbeddingParams& params) const;
  std::filesystem::path report_path(const std::string& algorithm) const;
  std::filesystem::path scores_path(Measure m) const;

private:
  std::string ingest_key() const;
  std::string centrality_key(Measure m) const;
  std::string embed_key(const std::string& algorithm, const EmbeddingParams& params) const;
  std::string classify_key(const std::string& algorithm) const;
  std::string analyze_key(const std::string& algorithm, Measure m) const;
  std::filesystem::path stage_dir(const std::string& stage, const std::string& key) const;
  void require_ingested() const;
  EmbeddingMatrix compute_embedding(const std::string& algorithm, const EmbeddingParams& params);
  void record(StageRecord r);
  void add_artifact(const std::filesystem::path& path);

  PipelineConfig config_;
  std::optional<Graph> graph_;
  std::optional<LabelTable> labels_;
  std::string input_digest_;
  Manifest manifest_;
};

} // namespace graphembed
