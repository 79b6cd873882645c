#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "graphembed/error.hpp"
#include "graphembed/pipeline.hpp"
#include "support/graphs.hpp"

using namespace graphembed;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path root;

  explicit Workspace(const std::string& name) {
    root = fs::temp_directory_path() / ("graphembed_pipeline_" + name);
    fs::remove_all(root);
    fs::create_directories(root);
    auto corpus = testsupport::citation_corpus(160, 3, 11);
    std::ofstream(root / "g.edges") << corpus.edges;
    std::ofstream(root / "g.labels") << corpus.labels;
  }
  ~Workspace() { fs::remove_all(root); }

  PipelineConfig config(bool undirected = true) const {
    const std::string text = R"({
      "dataset": "toy", "edges": "g.edges", "labels": "g.labels",
      "directed_input": true, "undirected": )" + std::string(undirected ? "true" : "false") + R"(,
      "grid": {"C": [0.5, 2], "dims": [8, 12], "normalize": [false], "p": [1, 2], "q": [1]},
      "line": {"samples_per_edge": 20},
      "node2vec": {"walks_per_node": 2, "walk_length": 12, "window": 3},
      "output_dir": "out", "cache_dir": "cache"
    })";
    return PipelineConfig::from_json_text(text, root);
  }
};

std::map<std::string, StageStatus> statuses(const Manifest& m) {
  std::map<std::string, StageStatus> out;
  for (const auto& r : m.stages) out[r.name] = r.status;
  return out;
}

std::vector<std::string> recomputed(const Manifest& m) {
  std::vector<std::string> out;
  for (const auto& r : m.stages)
    if (r.status == StageStatus::Computed) out.push_back(r.name);
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

} // namespace

TEST_CASE("config parsing and validation") {
  Workspace ws("config");
  auto cfg = ws.config();
  CHECK(cfg.dataset == "toy");
  CHECK(cfg.edges_path == ws.root / "g.edges");
  CHECK(cfg.grid.dims == std::vector<std::size_t>{8, 12});
  CHECK(cfg.node2vec_p == std::vector<double>{1, 2});
  CHECK(cfg.grid_for("node2vec").p_values.size() == 2);
  CHECK(cfg.grid_for("line1").p_values == std::vector<double>{1.0});
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.hash() == ws.config().hash());

  auto changed = cfg;
  changed.seed = 7;
  CHECK(changed.hash() != cfg.hash());

  auto missing = cfg;
  missing.labels_path = ws.root / "nope";
  CHECK_THROWS_AS(missing.validate(), ContractViolation);

  auto unknown = cfg;
  unknown.algorithms = {"deepwalk"};
  CHECK_THROWS_AS(unknown.validate(), ContractViolation);

  CHECK_THROWS_AS(PipelineConfig::from_json_text("{not json"), ParseError);
  CHECK_THROWS_AS(PipelineConfig::from_json_text(R"({"seed": "x"})"), ParseError);
  CHECK_THROWS_AS(PipelineConfig::from_json_text(R"({"measures": ["fame"]})"), ContractViolation);
}

TEST_CASE("full run, cached rerun and determinism") {
  Workspace ws("run");
  auto cfg = ws.config();
  Pipeline first(cfg);
  auto m1 = first.run();
  CHECK(m1.succeeded(cfg.skippable));
  CHECK(m1.recomputed() > 0);

  const auto measures = first.measures();
  CHECK(measures.size() == 4);
  for (const auto& algo : known_algorithms()) {
    CHECK(fs::exists(first.report_path(algo)));
    const auto report = first.report(algo);
    CHECK(report.fold_scores.size() == 5);
    CHECK(report.mean > 0.4);
    for (auto m : measures)
      for (const auto* split : {"incorrect", "correct"})
        CHECK(fs::exists(ws.root / "out" / ("toy." + algo + "." + std::string(measure_name(m)) + "." + split + ".dist")));
    // Series totals conserve the split sizes for degree.
    auto series = first.series(algo, Measure::Degree);
    CHECK(series[0].total() + series[1].total() == 160);
  }

  const auto pr = first.scores(Measure::PageRank);
  CHECK(std::abs(std::accumulate(pr.values.begin(), pr.values.end(), 0.0) - 1.0) <= 1e-9);
  CHECK(fs::exists(ws.root / "out" / "toy.manifest"));

  Pipeline again(cfg);
  auto m2 = again.run();
  CHECK(m2.recomputed() == 0);
  CHECK(m2.artifacts_digest() == m1.artifacts_digest());

  auto fresh = cfg;
  fresh.cache_dir = ws.root / "cache_fresh";
  Pipeline third(fresh);
  auto m3 = third.run();
  CHECK(m3.recomputed() == m1.recomputed());
  CHECK(m3.artifacts_digest() == m1.artifacts_digest());
}

TEST_CASE("a config change invalidates exactly the dependent stages") {
  Workspace ws("invalidate");
  auto cfg = ws.config();
  Pipeline(cfg).run();

  SUBCASE("classifier grid") {
    auto c = cfg;
    c.grid.C_values = {1.0};
    auto m = Pipeline(c).run();
    for (const auto& name : recomputed(m)) CHECK((starts_with(name, "classify:") || starts_with(name, "analyze:")));
    CHECK(recomputed(m).size() == 4 + 4 * 4);
  }
  SUBCASE("pagerank damping") {
    auto c = cfg;
    c.pagerank.alpha = 0.5;
    auto m = Pipeline(c).run();
    std::vector<std::string> expect{"centrality:pagerank"};
    for (const auto& algo : known_algorithms()) expect.push_back("analyze:" + algo + ":pagerank");
    CHECK(recomputed(m) == expect);
  }
  SUBCASE("node2vec walk length") {
    auto c = cfg;
    c.walk.walk_length = 10;
    auto m = Pipeline(c).run();
    for (const auto& name : recomputed(m)) CHECK(name.find("node2vec") != std::string::npos);
    CHECK(recomputed(m).size() == 4 + 1 + 4);
  }
  SUBCASE("seed") {
    auto c = cfg;
    c.seed = 1234;
    auto m = Pipeline(c).run();
    for (const auto& name : recomputed(m)) {
      CHECK_FALSE(starts_with(name, "centrality:"));
      CHECK(name != "ingest");
    }
    CHECK(statuses(m).at("ingest") == StageStatus::Cached);
    CHECK(statuses(m).at("centrality:betweenness") == StageStatus::Cached);
  }
}

TEST_CASE("eigenmaps on a directed graph is skipped as unsupported") {
  Workspace ws("directed");
  auto cfg = ws.config(false);
  cfg.algorithms = {"eigenmaps", "line1"};
  auto m = Pipeline(cfg).run();
  auto st = statuses(m);
  CHECK(st.at("classify:eigenmaps") == StageStatus::SkippedUnsupported);
  CHECK(st.at("classify:line1") == StageStatus::Computed);
  CHECK(st.count("analyze:eigenmaps:indegree") == 0);
  CHECK_FALSE(m.succeeded(cfg.skippable));
  CHECK(m.succeeded({"eigenmaps"}));
  CHECK(m.to_text().find("stage.classify:eigenmaps.status=skipped-unsupported") != std::string::npos);
}

TEST_CASE("resource exhaustion is recorded as skipped") {
  Workspace ws("resource");
  auto cfg = ws.config();
  cfg.algorithms = {"eigenmaps"};
  cfg.eigenmaps.solver = EigenSolverKind::Iterative;
  cfg.eigenmaps.iterative.memory_budget = 1024;
  auto m = Pipeline(cfg).run();
  CHECK(statuses(m).at("classify:eigenmaps") == StageStatus::SkippedResource);
  CHECK(m.succeeded({"eigenmaps"}));
  CHECK_FALSE(m.succeeded({}));
}

TEST_CASE("missing upstream artifacts name the producing subcommand") {
  Workspace ws("upstream");
  auto cfg = ws.config();
  Pipeline p(cfg);
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const ContractViolation& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([&] { p.ingest(false); }).find("graphembed ingest") != std::string::npos);
  p.ingest();
  CHECK(message([&] { p.scores(Measure::PageRank); }).find("graphembed centrality --measure pagerank") != std::string::npos);
  CHECK(message([&] { p.classify("line1", false); }).find("graphembed embed --algo line1") != std::string::npos);
  CHECK(message([&] { p.analyze("line2", Measure::Degree); }).find("graphembed classify --algo line2") != std::string::npos);
}

TEST_CASE("embedding checksums repeat for the same seed") {
  Workspace ws("embed");
  auto cfg = ws.config();
  Pipeline p(cfg);
  p.ingest();
  EmbeddingParams pt{8, 1, 1};
  p.embed("line1", pt);
  const auto path = p.embedding_path("line1", pt);
  std::ifstream in(path);
  const std::string first((std::istreambuf_iterator<char>(in)), {});
  fs::remove_all(ws.root / "cache" / "embed");
  Pipeline q(cfg);
  q.ingest();
  CHECK(q.embed("line1", pt).status == StageStatus::Computed);
  std::ifstream in2(path);
  CHECK(std::string((std::istreambuf_iterator<char>(in2)), {}) == first);
  CHECK(fs::exists(path.parent_path() / "config.json"));
}

TEST_CASE("the cache directory can be overridden from the environment") {
  Workspace ws("env");
  auto cfg = ws.config();
  cfg.algorithms = {"line1"};
  const auto alt = ws.root / "alt_cache";
  setenv("GRAPHEMBED_CACHE", alt.c_str(), 1);
  Pipeline p(cfg);
  p.ingest();
  unsetenv("GRAPHEMBED_CACHE");
  CHECK(fs::exists(alt / "ingest"));
  CHECK_FALSE(fs::exists(ws.root / "cache"));
}
