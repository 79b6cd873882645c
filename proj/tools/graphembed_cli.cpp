// graphembed: runs the embedding/classification/centrality pipeline one stage at a time
// or end to end. Every subcommand reads the same JSON config; stage outputs are cached
// under content keys so later subcommands pick them up.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "graphembed/error.hpp"
#include "graphembed/pipeline.hpp"

namespace fs = std::filesystem;
using namespace graphembed;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> cache;
  std::optional<unsigned> workers;
  std::vector<std::string> algos;
  std::vector<std::string> measures;
  std::optional<std::size_t> dim;
  std::optional<double> p;
  std::optional<double> q;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--cache", c.cache, "cache directory (overrides GRAPHEMBED_CACHE)");
  cmd->add_option("--workers", c.workers, "worker threads for embed/centrality/classify");
  cmd->add_option("--algo", c.algos, "algorithm(s): eigenmaps, line1, line2, node2vec");
  cmd->add_option("--measure", c.measures, "centrality measure(s)");
}

PipelineConfig load_config(const Common& c) {
  auto cfg = PipelineConfig::load(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.output_dir = *c.out;
  if (c.workers) cfg.workers = *c.workers;
  if (c.cache) setenv("GRAPHEMBED_CACHE", c.cache->c_str(), 1);
  if (!c.algos.empty()) cfg.algorithms = c.algos;
  if (!c.measures.empty()) {
    cfg.measures.clear();
    for (const auto& m : c.measures) {
      auto parsed = parse_measure(m);
      if (!parsed) throw ContractViolation("unknown measure '" + m + "'");
      cfg.measures.push_back(*parsed);
    }
  }
  return cfg;
}

void report_stage(const StageRecord& r) {
  std::cout << r.name << ": " << stage_status_name(r.status);
  if (!r.reason.empty()) std::cout << " (" << r.reason << ')';
  std::cout << '\n';
}

bool ok(const StageRecord& r, const PipelineConfig& cfg) {
  Manifest m;
  m.stages.push_back(r);
  return m.succeeded(cfg.skippable);
}

int cmd_ingest(const Common& c) {
  Pipeline pl(load_config(c));
  auto r = pl.ingest();
  report_stage(r);
  std::cout << "nodes=" << pl.graph().num_nodes() << " edges=" << pl.graph().num_edges()
            << " directed=" << (pl.graph().directed() ? 1 : 0) << " classes=" << pl.labels().num_classes() << '\n';
  return 0;
}

int cmd_centrality(const Common& c) {
  Pipeline pl(load_config(c));
  pl.ingest(false);
  for (auto m : pl.measures()) {
    report_stage(pl.centrality(m));
    std::cout << "  " << pl.scores_path(m).string() << '\n';
  }
  return 0;
}

int cmd_embed(const Common& c) {
  auto cfg = load_config(c);
  Pipeline pl(cfg);
  pl.ingest(false);
  bool all_ok = true;
  for (const auto& algo : pl.config().algorithms) {
    std::vector<EmbeddingParams> points;
    if (c.dim || c.p || c.q) {
      EmbeddingParams pt;
      pt.dim = c.dim.value_or(pl.config().grid.dims.front());
      pt.p = c.p.value_or(1.0);
      pt.q = c.q.value_or(1.0);
      points.push_back(pt);
    } else {
      points = pl.config().grid_for(algo).embedding_points();
    }
    for (const auto& pt : points) {
      auto r = pl.embed(algo, pt);
      report_stage(r);
      if (r.status == StageStatus::Computed || r.status == StageStatus::Cached)
        std::cout << "  " << pl.embedding_path(algo, pt).string() << '\n';
      all_ok = all_ok && ok(r, pl.config());
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_classify(const Common& c) {
  Pipeline pl(load_config(c));
  pl.ingest(false);
  bool all_ok = true;
  for (const auto& algo : pl.config().algorithms) {
    auto r = pl.classify(algo, false);
    report_stage(r);
    if (r.status == StageStatus::Computed || r.status == StageStatus::Cached) {
      const auto rep = pl.report(algo);
      std::cout << "  mean_micro_f1=" << rep.mean << " std=" << rep.stddev << "  "
                << pl.report_path(algo).string() << '\n';
    }
    all_ok = all_ok && ok(r, pl.config());
  }
  return all_ok ? 0 : 1;
}

int cmd_analyze(const Common& c) {
  Pipeline pl(load_config(c));
  pl.ingest(false);
  bool all_ok = true;
  for (const auto& algo : pl.config().algorithms)
    for (auto m : pl.measures()) {
      auto r = pl.analyze(algo, m);
      report_stage(r);
      all_ok = all_ok && ok(r, pl.config());
    }
  return all_ok ? 0 : 1;
}

int cmd_run(const Common& c) {
  Pipeline pl(load_config(c));
  const auto manifest = pl.run();
  for (const auto& r : manifest.stages) report_stage(r);
  std::cout << "recomputed=" << manifest.recomputed() << " artifacts_digest=" << manifest.artifacts_digest() << '\n';
  return manifest.succeeded(pl.config().skippable) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph embedding node-classification pipeline"};
  app.require_subcommand(1);

  Common common;
  auto* ingest = app.add_subcommand("ingest", "parse the edge list and labels into the cache");
  auto* centrality = app.add_subcommand("centrality", "compute centrality scores on the cached graph");
  auto* embed = app.add_subcommand("embed", "train embeddings on the cached graph");
  auto* classify = app.add_subcommand("classify", "nested cross-validation over cached embeddings");
  auto* analyze = app.add_subcommand("analyze", "centrality distributions of (mis)classified nodes");
  auto* run = app.add_subcommand("run", "every stage end to end, writing a manifest");
  for (auto* cmd : {ingest, centrality, embed, classify, analyze, run}) add_common(cmd, common);
  embed->add_option("--dim", common.dim, "embedding dimension (default: whole grid)");
  embed->add_option("--p", common.p, "node2vec return parameter");
  embed->add_option("--q", common.q, "node2vec in-out parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(common);
    if (*centrality) return cmd_centrality(common);
    if (*embed) return cmd_embed(common);
    if (*classify) return cmd_classify(common);
    if (*analyze) return cmd_analyze(common);
    if (*run) return cmd_run(common);
  } catch (const ContractViolation& e) {
    std::cerr << "graphembed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "graphembed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
