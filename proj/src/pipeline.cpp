#include "graphembed/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "graphembed/error.hpp"
#include "graphembed/hashing.hpp"
#include "text_util.hpp"

namespace graphembed {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kCompleteMarker = "complete";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    if (!out) throw Error("write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

std::string solver_name(EigenSolverKind k) {
  switch (k) {
  case EigenSolverKind::Dense: return "dense";
  case EigenSolverKind::Iterative: return "iterative";
  case EigenSolverKind::Auto: break;
  }
  return "auto";
}

EigenSolverKind parse_solver(const std::string& s) {
  if (s == "dense") return EigenSolverKind::Dense;
  if (s == "iterative") return EigenSolverKind::Iterative;
  if (s == "auto") return EigenSolverKind::Auto;
  throw ContractViolation("unknown eigensolver '" + s + "'");
}

template <typename T>
void read_opt(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

json grid_json(const HyperGrid& g) {
  return json{{"C", g.C_values},
              {"dims", g.dims},
              {"normalize", std::vector<bool>(g.normalize.begin(), g.normalize.end())},
              {"p", g.p_values},
              {"q", g.q_values}};
}

std::string params_tag(const EmbeddingParams& p) {
  return "dim=" + std::to_string(p.dim) + ",p=" + detail::format_double(p.p) + ",q=" +
         detail::format_double(p.q);
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"eigenmaps", "line1", "line2", "node2vec"};
  return names;
}

// ---------------------------------------------------------------------------------------
// Config

PipelineConfig PipelineConfig::from_json_text(const std::string& text, const fs::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() || base.empty() ? fs::path(p) : base / p; };
  try {
    read_opt(j, "dataset", c.dataset);
    if (j.contains("edges")) c.edges_path = resolve(j.at("edges").get<std::string>());
    if (j.contains("labels")) c.labels_path = resolve(j.at("labels").get<std::string>());
    read_opt(j, "directed_input", c.directed_input);
    read_opt(j, "undirected", c.make_undirected);
    read_opt(j, "accumulate_weights", c.accumulate_weights);
    read_opt(j, "algorithms", c.algorithms);
    if (j.contains("measures")) {
      c.measures.clear();
      for (const auto& m : j.at("measures")) {
        auto parsed = parse_measure(m.get<std::string>());
        if (!parsed) throw ContractViolation("unknown measure '" + m.get<std::string>() + "'");
        c.measures.push_back(*parsed);
      }
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      read_opt(g, "C", c.grid.C_values);
      read_opt(g, "dims", c.grid.dims);
      if (g.contains("normalize")) c.grid.normalize = g.at("normalize").get<std::vector<bool>>();
      read_opt(g, "p", c.node2vec_p);
      read_opt(g, "q", c.node2vec_q);
    }
    if (j.contains("line")) {
      const auto& l = j.at("line");
      read_opt(l, "negatives", c.line.negatives);
      read_opt(l, "initial_rate", c.line.initial_rate);
      read_opt(l, "total_samples", c.line.total_samples);
      read_opt(l, "samples_per_edge", c.line_samples_per_edge);
      read_opt(l, "noise_exponent", c.line.noise_exponent);
    }
    if (j.contains("node2vec")) {
      const auto& w = j.at("node2vec");
      read_opt(w, "walks_per_node", c.walk.walks_per_node);
      read_opt(w, "walk_length", c.walk.walk_length);
      read_opt(w, "window", c.walk.window);
      read_opt(w, "negatives", c.walk.negatives);
      read_opt(w, "epochs", c.walk.epochs);
      read_opt(w, "initial_rate", c.walk.initial_rate);
      read_opt(w, "noise_exponent", c.walk.noise_exponent);
    }
    if (j.contains("eigenmaps")) {
      const auto& e = j.at("eigenmaps");
      if (e.contains("solver")) c.eigenmaps.solver = parse_solver(e.at("solver").get<std::string>());
      read_opt(e, "dense_threshold", c.eigenmaps.dense_threshold);
      read_opt(e, "tolerance", c.eigenmaps.iterative.tolerance);
      read_opt(e, "memory_budget", c.eigenmaps.iterative.memory_budget);
    }
    if (j.contains("pagerank")) {
      const auto& p = j.at("pagerank");
      read_opt(p, "alpha", c.pagerank.alpha);
      read_opt(p, "tolerance", c.pagerank.tolerance);
      read_opt(p, "max_iterations", c.pagerank.max_iterations);
    }
    if (j.contains("cv")) {
      const auto& v = j.at("cv");
      read_opt(v, "outer_folds", c.cv.outer_folds);
      read_opt(v, "inner_folds", c.cv.inner_folds);
      read_opt(v, "gradient_tolerance", c.cv.logreg.gradient_tolerance);
      read_opt(v, "max_iterations", c.cv.logreg.max_iterations);
    }
    if (j.contains("bins")) c.binning.bins = j.at("bins").get<std::size_t>();
    read_opt(j, "seed", c.seed);
    read_opt(j, "workers", c.workers);
    if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>());
    if (j.contains("cache_dir")) c.cache_dir = resolve(j.at("cache_dir").get<std::string>());
    read_opt(j, "skippable", c.skippable);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  auto c = from_json_text(read_file(path), path.parent_path());
  return c;
}

std::string PipelineConfig::canonical_json() const {
  json j;
  j["dataset"] = dataset;
  j["directed_input"] = directed_input;
  j["undirected"] = make_undirected;
  j["accumulate_weights"] = accumulate_weights;
  j["algorithms"] = algorithms;
  std::vector<std::string> m;
  for (auto x : measures) m.emplace_back(measure_name(x));
  j["measures"] = m;
  j["grid"] = grid_json(grid);
  j["grid"]["p"] = node2vec_p;
  j["grid"]["q"] = node2vec_q;
  j["line"] = {{"negatives", line.negatives},
               {"initial_rate", line.initial_rate},
               {"total_samples", line.total_samples},
               {"samples_per_edge", line_samples_per_edge},
               {"noise_exponent", line.noise_exponent}};
  j["node2vec"] = {{"walks_per_node", walk.walks_per_node}, {"walk_length", walk.walk_length},
                   {"window", walk.window},                 {"negatives", walk.negatives},
                   {"epochs", walk.epochs},                 {"initial_rate", walk.initial_rate},
                   {"noise_exponent", walk.noise_exponent}};
  j["eigenmaps"] = {{"solver", solver_name(eigenmaps.solver)},
                    {"dense_threshold", eigenmaps.dense_threshold},
                    {"tolerance", eigenmaps.iterative.tolerance}};
  j["pagerank"] = {{"alpha", pagerank.alpha},
                   {"tolerance", pagerank.tolerance},
                   {"max_iterations", pagerank.max_iterations}};
  j["cv"] = {{"outer_folds", cv.outer_folds},
             {"inner_folds", cv.inner_folds},
             {"gradient_tolerance", cv.logreg.gradient_tolerance},
             {"max_iterations", cv.logreg.max_iterations}};
  j["bins"] = binning.bins;
  j["seed"] = seed;
  j["skippable"] = skippable;
  return j.dump();
}

std::string PipelineConfig::hash() const { return sha256_hex(canonical_json()); }

void PipelineConfig::validate() const {
  if (edges_path.empty()) throw ContractViolation("config: 'edges' is required");
  if (labels_path.empty()) throw ContractViolation("config: 'labels' is required");
  if (!fs::exists(edges_path)) throw ContractViolation("config: edge file " + edges_path.string() + " does not exist");
  if (!fs::exists(labels_path)) throw ContractViolation("config: label file " + labels_path.string() + " does not exist");
  for (const auto& a : algorithms)
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end())
      throw ContractViolation("config: unknown algorithm '" + a + "'");
  if (grid.C_values.empty() || grid.dims.empty() || grid.normalize.empty() || node2vec_p.empty() ||
      node2vec_q.empty())
    throw ContractViolation("config: every grid axis needs at least one value");
  if (make_undirected && !directed_input)
    throw ContractViolation("config: 'undirected' conversion needs a directed input");
}

HyperGrid PipelineConfig::grid_for(const std::string& algorithm) const {
  HyperGrid g = grid;
  if (algorithm == "node2vec") {
    g.p_values = node2vec_p;
    g.q_values = node2vec_q;
  } else {
    g.p_values = {1.0};
    g.q_values = {1.0};
  }
  return g;
}

// ---------------------------------------------------------------------------------------
// Manifest

std::string_view stage_status_name(StageStatus s) {
  switch (s) {
  case StageStatus::Computed: return "computed";
  case StageStatus::Cached: return "cached";
  case StageStatus::SkippedUnsupported: return "skipped-unsupported";
  case StageStatus::SkippedResource: return "skipped-resource";
  case StageStatus::Failed: return "failed";
  }
  return "unknown";
}

std::size_t Manifest::recomputed() const {
  return static_cast<std::size_t>(std::count_if(stages.begin(), stages.end(), [](const StageRecord& r) {
    return r.status == StageStatus::Computed;
  }));
}

std::string Manifest::artifacts_digest() const {
  std::string all;
  for (const auto& [path, sum] : artifacts) all += path + " " + sum + "\n";
  return sha256_hex(all);
}

bool Manifest::succeeded(const std::vector<std::string>& skippable) const {
  for (const auto& r : stages) {
    if (r.status == StageStatus::Computed || r.status == StageStatus::Cached) continue;
    if (r.status == StageStatus::Failed) return false;
    const bool allowed = std::any_of(skippable.begin(), skippable.end(), [&](const std::string& s) {
      return r.name.find(":" + s) != std::string::npos;
    });
    if (!allowed) return false;
  }
  return true;
}

std::string Manifest::to_text() const {
  std::ostringstream out;
  out << "# graphembed run manifest\n";
  out << "config_hash=" << config_hash << '\n';
  out << "dataset=" << dataset << '\n';
  out << "seed=" << seed << '\n';
  out << "recomputed=" << recomputed() << '\n';
  for (const auto& r : stages) {
    out << "stage." << r.name << ".status=" << stage_status_name(r.status) << '\n';
    out << "stage." << r.name << ".key=" << r.key << '\n';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    out << "stage." << r.name << ".seconds=" << buf << '\n';
    if (!r.reason.empty()) out << "stage." << r.name << ".reason=" << r.reason << '\n';
  }
  for (const auto& [path, sum] : artifacts) out << "artifact." << path << '=' << sum << '\n';
  out << "artifacts_digest=" << artifacts_digest() << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  if (const char* env = std::getenv("GRAPHEMBED_CACHE"); env && *env) config_.cache_dir = env;
  config_.validate();
  const unsigned w = std::max(1u, config_.workers);
  config_.line.workers = w;
  config_.walk.workers = w;
  config_.eigenmaps.iterative.workers = w;
  config_.cv.workers = w;
  manifest_.config_hash = config_.hash();
  manifest_.dataset = config_.dataset;
  manifest_.seed = config_.seed;
}

std::vector<Measure> Pipeline::measures() const {
  if (!config_.measures.empty()) return config_.measures;
  return measures_for(graph());
}

const Graph& Pipeline::graph() const {
  require_ingested();
  return *graph_;
}

const LabelTable& Pipeline::labels() const {
  require_ingested();
  return *labels_;
}

void Pipeline::require_ingested() const {
  if (!graph_ || !labels_) throw ContractViolation("no ingested graph; run `graphembed ingest` first");
}

std::string Pipeline::ingest_key() const {
  if (input_digest_.empty()) {
    auto& self = const_cast<Pipeline&>(*this);
    self.input_digest_ = sha256_file(config_.edges_path) + sha256_file(config_.labels_path);
  }
  return sha256_hex("ingest|" + input_digest_ + "|" + std::to_string(config_.directed_input) + "|" +
                    std::to_string(config_.make_undirected) + "|" + std::to_string(config_.accumulate_weights));
}

std::string Pipeline::centrality_key(Measure m) const {
  std::string k = ingest_key() + "|" + std::string(measure_name(m));
  if (m == Measure::PageRank)
    k += "|" + detail::format_double(config_.pagerank.alpha) + "|" +
         detail::format_double(config_.pagerank.tolerance) + "|" + std::to_string(config_.pagerank.max_iterations);
  return sha256_hex(k);
}

std::string Pipeline::embed_key(const std::string& algorithm, const EmbeddingParams& params) const {
  json j;
  j["ingest"] = ingest_key();
  j["algorithm"] = algorithm;
  j["dim"] = params.dim;
  j["seed"] = stage_seed(config_.seed, "embed:" + algorithm + ":" + params_tag(params));
  if (algorithm == "eigenmaps") {
    j["solver"] = solver_name(config_.eigenmaps.solver);
    j["dense_threshold"] = config_.eigenmaps.dense_threshold;
    j["tolerance"] = config_.eigenmaps.iterative.tolerance;
    j.erase("seed");
    j["seed"] = stage_seed(config_.seed, "embed:eigenmaps");
  } else if (algorithm == "line1" || algorithm == "line2") {
    j["negatives"] = config_.line.negatives;
    j["initial_rate"] = config_.line.initial_rate;
    j["total_samples"] = config_.line.total_samples;
    j["samples_per_edge"] = config_.line_samples_per_edge;
    j["noise_exponent"] = config_.line.noise_exponent;
    j["workers"] = config_.line.workers;
  } else {
    j["p"] = params.p;
    j["q"] = params.q;
    j["walks_per_node"] = config_.walk.walks_per_node;
    j["walk_length"] = config_.walk.walk_length;
    j["window"] = config_.walk.window;
    j["negatives"] = config_.walk.negatives;
    j["epochs"] = config_.walk.epochs;
    j["initial_rate"] = config_.walk.initial_rate;
    j["noise_exponent"] = config_.walk.noise_exponent;
    j["workers"] = config_.walk.workers;
  }
  return sha256_hex(j.dump());
}

std::string Pipeline::classify_key(const std::string& algorithm) const {
  json j;
  j["algorithm"] = algorithm;
  const auto grid = config_.grid_for(algorithm);
  j["grid"] = grid_json(grid);
  std::vector<std::string> embeds;
  for (const auto& pt : grid.embedding_points()) embeds.push_back(embed_key(algorithm, pt));
  j["embeddings"] = embeds;
  j["seed"] = stage_seed(config_.seed, "classify:" + algorithm);
  j["outer"] = config_.cv.outer_folds;
  j["inner"] = config_.cv.inner_folds;
  j["tol"] = config_.cv.logreg.gradient_tolerance;
  j["max_iter"] = config_.cv.logreg.max_iterations;
  return sha256_hex(j.dump());
}

std::string Pipeline::analyze_key(const std::string& algorithm, Measure m) const {
  return sha256_hex(classify_key(algorithm) + "|" + centrality_key(m) + "|" + std::to_string(config_.binning.bins) +
                    "|" + config_.dataset + "|" + std::to_string(config_.seed));
}

fs::path Pipeline::stage_dir(const std::string& stage, const std::string& key) const {
  return config_.cache_dir / stage / key.substr(0, 24);
}

void Pipeline::record(StageRecord r) { manifest_.stages.push_back(std::move(r)); }

void Pipeline::add_artifact(const fs::path& path) {
  std::string name;
  const auto out_rel = fs::relative(path, config_.output_dir);
  const auto cache_rel = fs::relative(path, config_.cache_dir);
  if (!out_rel.empty() && out_rel.native().rfind("..", 0) != 0) name = "out/" + out_rel.generic_string();
  else name = "cache/" + cache_rel.generic_string();
  manifest_.artifacts[name] = sha256_file(path);
}

StageRecord Pipeline::ingest(bool compute) {
  const auto start = std::chrono::steady_clock::now();
  const auto key = ingest_key();
  const auto dir = stage_dir("ingest", key);
  StageRecord r{"ingest", StageStatus::Cached, key, 0.0, {}};
  if (fs::exists(dir / kCompleteMarker)) {
    std::vector<std::string> tokens;
    {
      std::istringstream in(read_file(dir / "nodes.txt"));
      for (std::string t; std::getline(in, t);)
        if (!t.empty()) tokens.push_back(t);
    }
    const bool directed = read_file(dir / "directed.txt").rfind("1", 0) == 0;
    auto parsed = parse_edge_list(read_file(dir / "edges.txt"), IngestOptions{directed, false}, tokens);
    graph_ = std::move(parsed.graph);
    labels_ = parse_labels(read_file(dir / "labels.txt"), *graph_);
  } else {
    if (!compute)
      throw ContractViolation("no cached graph for this config; run `graphembed ingest` first");
    r.status = StageStatus::Computed;
    std::ifstream edges(config_.edges_path);
    if (!edges) throw Error("cannot open " + config_.edges_path.string());
    auto parsed = parse_edge_list(edges, IngestOptions{config_.directed_input, config_.accumulate_weights});
    Graph g = std::move(parsed.graph);
    if (config_.make_undirected) g = to_undirected(g);
    std::ifstream label_in(config_.labels_path);
    if (!label_in) throw Error("cannot open " + config_.labels_path.string());
    LabelTable labels = parse_labels(label_in, g);

    std::string nodes;
    for (const auto& t : g.nodes().tokens()) nodes += t + "\n";
    write_file(dir / "nodes.txt", nodes);
    write_file(dir / "edges.txt", serialize_edge_list(g));
    write_file(dir / "labels.txt", render([&](std::ostream& o) { serialize_labels(labels, g, o); }));
    write_file(dir / "directed.txt", g.directed() ? "1\n" : "0\n");
    write_file(dir / "stats.txt",
               "nodes=" + std::to_string(g.num_nodes()) + "\nedges=" + std::to_string(g.num_edges()) +
                   "\nedge_lines=" + std::to_string(parsed.stats.edge_lines) +
                   "\nself_loops_dropped=" + std::to_string(parsed.stats.self_loops_dropped) +
                   "\nduplicates_dropped=" + std::to_string(parsed.stats.duplicates_dropped) +
                   "\nclasses=" + std::to_string(labels.num_classes()) + "\n");
    write_file(dir / kCompleteMarker, key + "\n");
    graph_ = std::move(g);
    labels_ = std::move(labels);
  }
  add_artifact(dir / "edges.txt");
  add_artifact(dir / "labels.txt");
  r.seconds = elapsed_since(start);
  record(r);
  return r;
}

fs::path Pipeline::scores_path(Measure m) const {
  return config_.output_dir / (config_.dataset + "." + std::string(measure_name(m)) + ".scores");
}

StageRecord Pipeline::centrality(Measure m, bool compute) {
  require_ingested();
  const auto start = std::chrono::steady_clock::now();
  const auto key = centrality_key(m);
  const auto dir = stage_dir("centrality", key);
  const auto name = "centrality:" + std::string(measure_name(m));
  StageRecord r{name, StageStatus::Cached, key, 0.0, {}};
  if (!fs::exists(dir / kCompleteMarker)) {
    if (!compute) throw ContractViolation("no cached " + std::string(measure_name(m)) + " scores; run `graphembed centrality --measure " + std::string(measure_name(m)) + "` first");
    r.status = StageStatus::Computed;
    auto scores = compute_centrality(*graph_, m, config_.pagerank, config_.workers);
    if (m == Measure::PageRank) {
      const double sum = std::accumulate(scores.values.begin(), scores.values.end(), 0.0);
      if (std::abs(sum - 1.0) > 1e-9)
        throw NumericalError("pagerank scores sum to " + detail::format_double(sum) + ", not 1");
    }
    write_file(dir / "scores.txt", render([&](std::ostream& o) { write_scores(scores, *graph_, o); }));
    write_file(dir / kCompleteMarker, key + "\n");
  }
  fs::create_directories(config_.output_dir);
  fs::copy_file(dir / "scores.txt", scores_path(m), fs::copy_options::overwrite_existing);
  add_artifact(scores_path(m));
  r.seconds = elapsed_since(start);
  record(r);
  return r;
}

CentralityScores Pipeline::scores(Measure m) const {
  require_ingested();
  const auto dir = stage_dir("centrality", centrality_key(m));
  if (!fs::exists(dir / kCompleteMarker))
    throw ContractViolation("no cached " + std::string(measure_name(m)) + " scores; run `graphembed centrality --measure " + std::string(measure_name(m)) + "` first");
  std::istringstream in(read_file(dir / "scores.txt"));
  return read_scores(in, *graph_);
}

fs::path Pipeline::embedding_path(const std::string& algorithm, const EmbeddingParams& params) const {
  return stage_dir("embed", embed_key(algorithm, params)) / "embedding.txt";
}

EmbeddingMatrix Pipeline::compute_embedding(const std::string& algorithm, const EmbeddingParams& params) {
  const Graph& g = *graph_;
  const auto seed = stage_seed(config_.seed, "embed:" + algorithm + ":" + params_tag(params));
  if (algorithm == "eigenmaps") {
    auto opts = config_.eigenmaps;
    opts.iterative.seed = stage_seed(config_.seed, "embed:eigenmaps");
    // Nested eigenvectors: solve once at the largest grid dimension and slice.
    std::size_t top = params.dim;
    for (auto d : config_.grid.dims)
      if (d > top && d < g.num_nodes()) top = d;
    auto result = eigenmaps_embed(g, top, opts);
    EmbeddingMatrix requested;
    for (auto d : config_.grid.dims) {
      if (d > top) continue;
      EmbeddingMatrix slice;
      slice.algorithm = "eigenmaps";
      slice.rows = result.embedding.rows.leftCols(static_cast<Eigen::Index>(d));
      EmbeddingParams p{d, 1.0, 1.0};
      slice.config_hash = embed_key(algorithm, p);
      const auto path = embedding_path(algorithm, p);
      if (!fs::exists(path.parent_path() / kCompleteMarker)) {
        write_file(path, render([&](std::ostream& o) { write_embedding(slice, g, o); }));
        write_file(path.parent_path() / "config.json",
                   json{{"algorithm", algorithm}, {"dim", d}, {"solved_dim", top},
                        {"solver", solver_name(opts.solver)}, {"components", result.components}}.dump(2) + "\n");
        write_file(path.parent_path() / kCompleteMarker, slice.config_hash + "\n");
      }
      if (d == params.dim) requested = slice;
    }
    if (requested.rows.size() == 0) {
      requested = std::move(result.embedding);
      requested.rows.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(params.dim));
    }
    return requested;
  }
  if (algorithm == "line1" || algorithm == "line2") {
    LineConfig cfg = config_.line;
    cfg.order = algorithm == "line1" ? LineOrder::First : LineOrder::Second;
    cfg.dim = params.dim;
    cfg.seed = seed;
    if (cfg.total_samples == 0) cfg.total_samples = config_.line_samples_per_edge * g.num_edges();
    return line_train(g, cfg);
  }
  if (algorithm == "node2vec") {
    WalkConfig cfg = config_.walk;
    cfg.dim = params.dim;
    cfg.p = params.p;
    cfg.q = params.q;
    cfg.seed = seed;
    return node2vec_embed(g, cfg);
  }
  throw ContractViolation("unknown algorithm '" + algorithm + "'");
}

StageRecord Pipeline::embed(const std::string& algorithm, const EmbeddingParams& params, bool compute) {
  require_ingested();
  const auto start = std::chrono::steady_clock::now();
  const auto key = embed_key(algorithm, params);
  const auto path = embedding_path(algorithm, params);
  StageRecord r{"embed:" + algorithm + ":" + params_tag(params), StageStatus::Cached, key, 0.0, {}};
  if (algorithm == "eigenmaps" && graph_->directed()) {
    r.status = StageStatus::SkippedUnsupported;
    r.reason = "eigenmaps need an undirected graph";
    record(r);
    return r;
  }
  if (!fs::exists(path.parent_path() / kCompleteMarker)) {
    if (!compute)
      throw ContractViolation("no cached " + algorithm + " embedding for " + params_tag(params) +
                              "; run `graphembed embed --algo " + algorithm + "` first");
    r.status = StageStatus::Computed;
    try {
      auto emb = compute_embedding(algorithm, params);
      emb.config_hash = key;
      if (!fs::exists(path.parent_path() / kCompleteMarker)) {
        write_file(path, render([&](std::ostream& o) { write_embedding(emb, *graph_, o); }));
        write_file(path.parent_path() / "config.json",
                   json{{"algorithm", algorithm}, {"dim", params.dim}, {"p", params.p}, {"q", params.q},
                        {"seed", stage_seed(config_.seed, "embed:" + algorithm + ":" + params_tag(params))},
                        {"key", key}}.dump(2) + "\n");
        write_file(path.parent_path() / kCompleteMarker, key + "\n");
      }
    } catch (const ResourceError& e) {
      r.status = StageStatus::SkippedResource;
      r.reason = e.what();
      r.seconds = elapsed_since(start);
      record(r);
      return r;
    }
  }
  add_artifact(path);
  r.seconds = elapsed_since(start);
  record(r);
  return r;
}

EmbeddingMatrix Pipeline::embedding(const std::string& algorithm, const EmbeddingParams& params) const {
  require_ingested();
  const auto path = embedding_path(algorithm, params);
  if (!fs::exists(path.parent_path() / kCompleteMarker))
    throw ContractViolation("no cached " + algorithm + " embedding for " + params_tag(params) +
                            "; run `graphembed embed --algo " + algorithm + "` first");
  std::istringstream in(read_file(path));
  auto emb = read_embedding(in, *graph_);
  emb.algorithm = algorithm;
  emb.config_hash = embed_key(algorithm, params);
  return emb;
}

fs::path Pipeline::report_path(const std::string& algorithm) const {
  return config_.output_dir / (config_.dataset + "." + algorithm + ".report");
}

StageRecord Pipeline::classify(const std::string& algorithm, bool compute_embeddings) {
  require_ingested();
  const auto start = std::chrono::steady_clock::now();
  const auto key = classify_key(algorithm);
  const auto dir = stage_dir("classify", key);
  StageRecord r{"classify:" + algorithm, StageStatus::Cached, key, 0.0, {}};
  if (algorithm == "eigenmaps" && graph_->directed()) {
    r.status = StageStatus::SkippedUnsupported;
    r.reason = "eigenmaps need an undirected graph";
    record(r);
    return r;
  }
  if (!fs::exists(dir / kCompleteMarker)) {
    r.status = StageStatus::Computed;
    const auto grid = config_.grid_for(algorithm);
    for (const auto& pt : grid.embedding_points()) {
      auto er = embed(algorithm, pt, compute_embeddings);
      if (er.status == StageStatus::SkippedResource || er.status == StageStatus::SkippedUnsupported) {
        r.status = er.status;
        r.reason = "embedding " + params_tag(pt) + ": " + er.reason;
        r.seconds = elapsed_since(start);
        record(r);
        return r;
      }
    }
    auto provider = [&](const EmbeddingParams& pt) { return embedding(algorithm, pt); };
    auto report = nested_cv(provider, *labels_, grid, stage_seed(config_.seed, "classify:" + algorithm), config_.cv);
    report.algorithm = algorithm;
    write_file(dir / "report.txt", render([&](std::ostream& o) { write_report(report, *graph_, *labels_, o); }));
    write_file(dir / kCompleteMarker, key + "\n");
  } else {
    for (const auto& pt : config_.grid_for(algorithm).embedding_points())
      if (fs::exists(embedding_path(algorithm, pt))) add_artifact(embedding_path(algorithm, pt));
  }
  fs::create_directories(config_.output_dir);
  fs::copy_file(dir / "report.txt", report_path(algorithm), fs::copy_options::overwrite_existing);
  add_artifact(report_path(algorithm));
  r.seconds = elapsed_since(start);
  record(r);
  return r;
}

EvalReport Pipeline::report(const std::string& algorithm) const {
  require_ingested();
  const auto dir = stage_dir("classify", classify_key(algorithm));
  if (!fs::exists(dir / kCompleteMarker))
    throw ContractViolation("no cached " + algorithm + " evaluation report; run `graphembed classify --algo " +
                            algorithm + "` first");
  std::istringstream in(read_file(dir / "report.txt"));
  return read_report(in, *graph_, *labels_);
}

StageRecord Pipeline::analyze(const std::string& algorithm, Measure m, bool compute) {
  require_ingested();
  const auto start = std::chrono::steady_clock::now();
  const auto key = analyze_key(algorithm, m);
  const auto dir = stage_dir("analyze", key);
  StageRecord r{"analyze:" + algorithm + ":" + std::string(measure_name(m)), StageStatus::Cached, key, 0.0, {}};
  if (algorithm == "eigenmaps" && graph_->directed()) {
    r.status = StageStatus::SkippedUnsupported;
    r.reason = "no eigenmaps report for a directed graph";
    record(r);
    return r;
  }
  if (!fs::exists(dir / kCompleteMarker)) {
    if (!compute) throw ContractViolation("no cached analysis; run `graphembed analyze` first");
    r.status = StageStatus::Computed;
    const auto split = split_by_correctness(report(algorithm));
    const auto sc = scores(m);
    for (auto series : {misclassified_distribution(split, sc, config_.binning),
                        correct_distribution(split, sc, config_.binning)}) {
      series.dataset = config_.dataset;
      series.algorithm = algorithm;
      series.seed = config_.seed;
      write_file(dir / series_filename(series), render([&](std::ostream& o) { emit_series(series, o); }));
    }
    write_file(dir / kCompleteMarker, key + "\n");
  }
  fs::create_directories(config_.output_dir);
  for (const auto* split : {"incorrect", "correct"}) {
    const auto file = config_.dataset + "." + algorithm + "." + std::string(measure_name(m)) + "." + split + ".dist";
    fs::copy_file(dir / file, config_.output_dir / file, fs::copy_options::overwrite_existing);
    add_artifact(config_.output_dir / file);
  }
  r.seconds = elapsed_since(start);
  record(r);
  return r;
}

std::vector<PowerLawSeries> Pipeline::series(const std::string& algorithm, Measure m) const {
  require_ingested();
  const auto dir = stage_dir("analyze", analyze_key(algorithm, m));
  if (!fs::exists(dir / kCompleteMarker))
    throw ContractViolation("no cached analysis for " + algorithm + "; run `graphembed analyze --algo " + algorithm + "` first");
  std::vector<PowerLawSeries> out;
  for (const auto* split : {"incorrect", "correct"}) {
    std::istringstream in(read_file(dir / (config_.dataset + "." + algorithm + "." + std::string(measure_name(m)) +
                                           "." + split + ".dist")));
    out.push_back(parse_series(in));
  }
  return out;
}

Manifest Pipeline::run() {
  ingest();
  for (auto m : measures()) centrality(m);
  for (const auto& algorithm : config_.algorithms) {
    StageRecord cr;
    try {
      cr = classify(algorithm);
    } catch (const Error& e) {
      record({"classify:" + algorithm, StageStatus::Failed, classify_key(algorithm), 0.0, e.what()});
      continue;
    }
    if (cr.status != StageStatus::Computed && cr.status != StageStatus::Cached) continue;
    for (auto m : measures()) analyze(algorithm, m);
  }
  fs::create_directories(config_.output_dir);
  write_file(config_.output_dir / (config_.dataset + ".manifest"), manifest_.to_text());
  return manifest_;
}

} // namespace graphembed
