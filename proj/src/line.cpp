#include "graphembed/line.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>

#include "graphembed/error.hpp"
#include "graphembed/sgns.hpp"
#include "parallel.hpp"

namespace graphembed {

namespace {

constexpr int kMaxNegatives = 64;
// Workers refresh the shared progress counter this often.
constexpr std::uint64_t kProgressStride = 10000;

struct Arc {
  NodeIndex source;
  NodeIndex target;
};

} // namespace

LineModel LineModel::initialize(std::size_t num_nodes, std::size_t dim, Rng& rng) {
  LineModel m;
  m.dim = dim;
  m.vertex.resize(num_nodes * dim);
  for (auto& x : m.vertex)
    x = static_cast<float>((rng.uniform() - 0.5) / static_cast<double>(dim));
  m.context.assign(num_nodes * dim, 0.0f);
  return m;
}

bool LineModel::all_finite() const {
  auto finite = [](float x) { return std::isfinite(x); };
  return std::all_of(vertex.begin(), vertex.end(), finite) &&
         std::all_of(context.begin(), context.end(), finite);
}

AliasTable noise_table(const Graph& g, double exponent) {
  std::vector<double> degree(g.num_nodes(), 0.0);
  for (const auto& e : g.edges()) {
    degree[e.source] += e.weight;
    degree[e.target] += e.weight;
  }
  for (auto& d : degree) d = std::pow(d, exponent);
  return AliasTable(degree);
}

void sgns_step(LineModel& model, NodeIndex u, NodeIndex v, const AliasTable& noise, float rate,
                LineOrder order, int negatives, Rng& rng, std::span<float> scratch) {
  std::array<float*, kMaxNegatives + 1> outputs;
  auto row = [&](NodeIndex x) {
    return order == LineOrder::First ? model.vertex_row(x) : model.context_row(x);
  };
  outputs[0] = row(v);
  for (int k = 1; k <= negatives; ++k) outputs[static_cast<std::size_t>(k)] = row(noise.sample(rng));
  sgns_apply<float>(model.vertex_row(u),
                    std::span<float* const>(outputs.data(), static_cast<std::size_t>(negatives) + 1),
                    model.dim, rate, scratch.data());
}

double line_learning_rate(double initial, std::uint64_t step, std::uint64_t total) {
  const double rate = initial * (1.0 - static_cast<double>(step) / static_cast<double>(total));
  return std::max(rate, initial * 1e-4);
}

EmbeddingMatrix line_train(const Graph& g, const LineConfig& cfg, LineTrace* trace) {
  if (g.num_edges() == 0) throw ContractViolation("LINE: graph has no edges");
  if (cfg.negatives < 0 || cfg.negatives > kMaxNegatives)
    throw ContractViolation("LINE: negatives must lie in [0, 64]");
  if (!(cfg.initial_rate > 0.0)) throw ContractViolation("LINE: initial rate must be positive");
  if (cfg.dim == 0) throw ContractViolation("LINE: dimension must be positive");
  if (trace && cfg.workers > 1) throw ContractViolation("LINE: tracing requires one worker");

  std::vector<Arc> arcs;
  std::vector<double> weights;
  arcs.reserve(g.directed() ? g.num_edges() : 2 * g.num_edges());
  for (const auto& e : g.edges()) {
    arcs.push_back({e.source, e.target});
    weights.push_back(e.weight);
    if (!g.directed()) {
      arcs.push_back({e.target, e.source});
      weights.push_back(e.weight);
    }
  }
  const AliasTable edge_table(weights);
  const AliasTable noise = noise_table(g, cfg.noise_exponent);
  const std::uint64_t total = cfg.total_samples > 0 ? cfg.total_samples : 100 * g.num_edges();

  Rng init_rng(derive_seed({cfg.seed, 0x11e1}));
  LineModel model = LineModel::initialize(g.num_nodes(), cfg.dim, init_rng);

  // Fixed evaluation sample: positive arcs with pre-drawn negatives.
  std::vector<std::vector<NodeIndex>> eval;
  if (trace && trace->windows > 0) {
    Rng eval_rng(derive_seed({cfg.seed, 0xe7a1}));
    for (std::size_t i = 0; i < trace->sample_size; ++i) {
      const auto& arc = arcs[edge_table.sample(eval_rng)];
      std::vector<NodeIndex> ex{arc.source, arc.target};
      for (int k = 0; k < cfg.negatives; ++k) ex.push_back(noise.sample(eval_rng));
      eval.push_back(std::move(ex));
    }
    trace->losses.clear();
  }
  auto eval_loss = [&] {
    double sum = 0.0;
    std::vector<const float*> outs;
    for (const auto& ex : eval) {
      outs.clear();
      for (std::size_t k = 1; k < ex.size(); ++k)
        outs.push_back(cfg.order == LineOrder::First ? model.vertex_row(ex[k]) : model.context_row(ex[k]));
      sum += sgns_loss<float>(model.vertex_row(ex[0]),
                              std::span<const float* const>(outs.data(), outs.size()), model.dim);
    }
    return sum / static_cast<double>(eval.size());
  };

  const unsigned workers = std::max(1u, cfg.workers);
  std::atomic<std::uint64_t> progress{0};
  detail::parallel_for(workers, workers, [&](std::size_t w) {
    Rng rng(derive_seed({cfg.seed, 0x5a3b, w}));
    std::vector<float> scratch(cfg.dim);
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    const std::size_t windows = trace ? trace->windows : 0;
    std::size_t next_window = 0;
    std::uint64_t last_reported = 0;
    float rate = static_cast<float>(cfg.initial_rate);
    for (std::uint64_t local = 0; begin + local < end; ++local) {
      if (local % kProgressStride == 0) {
        progress += local - last_reported;
        last_reported = local;
        rate = static_cast<float>(line_learning_rate(cfg.initial_rate, progress.load(), total));
        if (workers > 1 && !model.all_finite())
          throw NumericalError("LINE: non-finite parameters after " +
                               std::to_string(progress.load()) + " samples");
      }
      if (windows > 0 && local * windows >= next_window * total) {
        trace->losses.push_back(eval_loss());
        ++next_window;
      }
      if (workers == 1) rate = static_cast<float>(line_learning_rate(cfg.initial_rate, local, total));
      const auto& arc = arcs[edge_table.sample(rng)];
      sgns_step(model, arc.source, arc.target, noise, rate, cfg.order, cfg.negatives, rng, scratch);
    }
    if (windows > 0) trace->losses.push_back(eval_loss());
  });

  if (!model.all_finite())
    throw NumericalError("LINE: training produced non-finite parameters (rate " +
                         std::to_string(cfg.initial_rate) + ", dim " + std::to_string(cfg.dim) + ")");

  EmbeddingMatrix emb;
  emb.algorithm = cfg.order == LineOrder::First ? "line1" : "line2";
  emb.rows.resize(static_cast<Eigen::Index>(g.num_nodes()), static_cast<Eigen::Index>(cfg.dim));
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    for (std::size_t j = 0; j < cfg.dim; ++j)
      emb.rows(u, static_cast<Eigen::Index>(j)) = model.vertex[std::size_t{u} * cfg.dim + j];
  return emb;
}

} // namespace graphembed
