#include "graphembed/node2vec.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <ostream>

#include "graphembed/alias_table.hpp"
#include "graphembed/error.hpp"
#include "graphembed/line.hpp"
#include "graphembed/sgns.hpp"
#include "parallel.hpp"

namespace graphembed {

namespace {

constexpr int kMaxNegatives = 64;
constexpr std::uint64_t kProgressStride = 10000;

std::uint32_t sample_weights(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double r = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r < 0.0) return static_cast<std::uint32_t>(i);
  }
  // Rounding left r marginally nonnegative: take the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<std::uint32_t>(i);
  return 0;
}

// Second-order transition sampler, either from per-arc alias tables packed into flat
// arrays or by recomputing weights at every step.
class TransitionSampler {
public:
  TransitionSampler(const Graph& g, const WalkConfig& cfg) : g_(g), cfg_(cfg) {
    arc_offset_.resize(g.num_nodes() + 1, 0);
    for (NodeIndex u = 0; u < g.num_nodes(); ++u) arc_offset_[u + 1] = arc_offset_[u] + g.out_degree(u);
    std::size_t entries = 0;
    for (NodeIndex prev = 0; prev < g.num_nodes(); ++prev)
      for (auto cur : g.out_neighbors(prev)) entries += g.out_degree(cur);
    precomputed_ = entries <= cfg.alias_budget;
    if (!precomputed_) return;

    table_offset_.resize(arc_offset_.back() + 1, 0);
    prob_.resize(entries);
    alias_.resize(entries);
    std::size_t arc = 0;
    for (NodeIndex prev = 0; prev < g.num_nodes(); ++prev)
      for (auto cur : g.out_neighbors(prev)) {
        const auto begin = table_offset_[arc];
        const auto len = g.out_degree(cur);
        table_offset_[arc + 1] = begin + len;
        if (len > 0) {
          auto w = transition_weights(g, prev, cur, cfg.p, cfg.q);
          AliasTable::build(w, std::span(prob_).subspan(begin, len),
                            std::span(alias_).subspan(begin, len));
        }
        ++arc;
      }
  }

  bool precomputed() const { return precomputed_; }

  /// Index into out_neighbors(cur) of the next node.
  std::uint32_t next(NodeIndex prev, NodeIndex cur, Rng& rng) const {
    if (!precomputed_) return sample_weights(transition_weights(g_, prev, cur, cfg_.p, cfg_.q), rng);
    auto nbrs = g_.out_neighbors(prev);
    const auto pos = static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), cur) - nbrs.begin());
    const auto arc = arc_offset_[prev] + pos;
    const auto begin = table_offset_[arc];
    const auto len = table_offset_[arc + 1] - begin;
    const auto slot = static_cast<std::uint32_t>(rng.below(len));
    return rng.uniform() < prob_[begin + slot] ? slot : alias_[begin + slot];
  }

private:
  const Graph& g_;
  const WalkConfig& cfg_;
  bool precomputed_ = false;
  std::vector<std::size_t> arc_offset_;
  std::vector<std::size_t> table_offset_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

void validate(const WalkConfig& cfg) {
  if (!(cfg.p > 0.0) || !(cfg.q > 0.0)) throw ContractViolation("node2vec: p and q must be positive");
  if (cfg.walk_length < 1) throw ContractViolation("node2vec: walk length must be at least 1");
  if (cfg.window < 1) throw ContractViolation("node2vec: window must be at least 1");
  if (cfg.dim == 0) throw ContractViolation("node2vec: dimension must be positive");
  if (cfg.negatives < 0 || cfg.negatives > kMaxNegatives)
    throw ContractViolation("node2vec: negatives must lie in [0, 64]");
}

} // namespace

std::vector<double> transition_weights(const Graph& g, NodeIndex prev, NodeIndex cur, double p,
                                       double q) {
  auto nbrs = g.out_neighbors(cur);
  auto weights = g.out_weights(cur);
  std::vector<double> out(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const auto x = nbrs[i];
    double bias = 0.0;
    if (x == prev) bias = 1.0 / p;
    else if (g.adjacent(prev, x)) bias = 1.0;
    else bias = 1.0 / q;
    out[i] = bias * weights[i];
  }
  return out;
}

WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg) {
  validate(cfg);
  std::vector<NodeIndex> starts;
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    if (g.out_degree(u) > 0) starts.push_back(u);

  const TransitionSampler sampler(g, cfg);
  WalkCorpus corpus(cfg.walks_per_node * starts.size());
  detail::parallel_for(corpus.size(), cfg.workers, [&](std::size_t idx) {
    const auto round = idx / starts.size();
    const auto start = starts[idx % starts.size()];
    Rng rng(derive_seed({cfg.seed, 0x3a1c, start, round}));
    Walk& walk = corpus[idx];
    walk.reserve(cfg.walk_length);
    walk.push_back(start);
    if (cfg.walk_length < 2) return;
    auto first = g.out_neighbors(start);
    walk.push_back(first[sample_weights(g.out_weights(start), rng)]);
    while (walk.size() < cfg.walk_length) {
      const auto cur = walk.back();
      const auto prev = walk[walk.size() - 2];
      auto nbrs = g.out_neighbors(cur);
      if (nbrs.empty()) break;
      walk.push_back(nbrs[sampler.next(prev, cur, rng)]);
    }
  });
  return corpus;
}

SkipGramResult skipgram_train(const WalkCorpus& corpus, const Graph& g, const WalkConfig& cfg) {
  validate(cfg);
  if (corpus.empty()) throw ContractViolation("skip-gram: empty walk corpus");

  const auto n = g.num_nodes();
  std::vector<bool> seen(n, false);
  std::uint64_t positions = 0;
  for (const auto& walk : corpus) {
    positions += walk.size();
    for (auto u : walk) {
      if (u >= n) throw ContractViolation("skip-gram: walk references an unknown node");
      seen[u] = true;
    }
  }
  const std::uint64_t total = positions * std::max<std::size_t>(cfg.epochs, 1);
  const AliasTable noise = noise_table(g, cfg.noise_exponent);

  Rng init_rng(derive_seed({cfg.seed, 0x5c19}));
  LineModel model = LineModel::initialize(n, cfg.dim, init_rng);

  const unsigned workers = std::max(1u, cfg.workers);
  const auto epochs = std::max<std::size_t>(cfg.epochs, 1);
  std::atomic<std::uint64_t> progress{0};
  detail::parallel_for(workers, workers, [&](std::size_t w) {
    Rng rng(derive_seed({cfg.seed, 0x7e11, w}));
    std::vector<float> scratch(cfg.dim);
    std::array<float*, kMaxNegatives + 1> outputs;
    const auto outputs_span = std::span<float* const>(outputs.data(), static_cast<std::size_t>(cfg.negatives) + 1);
    const std::size_t begin = corpus.size() * w / workers;
    const std::size_t end = corpus.size() * (w + 1) / workers;
    std::uint64_t local = 0, reported = 0;
    float rate = static_cast<float>(cfg.initial_rate);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch)
      for (std::size_t idx = begin; idx < end; ++idx) {
        const Walk& walk = corpus[idx];
        for (std::size_t i = 0; i < walk.size(); ++i, ++local) {
          if (local - reported >= kProgressStride || local == 0) {
            progress += local - reported;
            reported = local;
            rate = static_cast<float>(line_learning_rate(cfg.initial_rate, progress.load(), total));
          }
          if (workers == 1) rate = static_cast<float>(line_learning_rate(cfg.initial_rate, local, total));
          const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
          const std::size_t hi = std::min(walk.size(), i + cfg.window + 1);
          float* center = model.vertex_row(walk[i]);
          for (std::size_t j = lo; j < hi; ++j) {
            if (j == i) continue;
            outputs[0] = model.context_row(walk[j]);
            for (int k = 1; k <= cfg.negatives; ++k)
              outputs[static_cast<std::size_t>(k)] = model.context_row(noise.sample(rng));
            sgns_apply<float>(center, outputs_span, cfg.dim, rate, scratch.data());
          }
        }
      }
  });
  if (!model.all_finite())
    throw NumericalError("skip-gram: training produced non-finite parameters");

  SkipGramResult result;
  result.embedding.algorithm = "node2vec";
  result.embedding.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cfg.dim));
  std::size_t missing = 0;
  for (NodeIndex u = 0; u < n; ++u) {
    if (!seen[u]) {
      ++missing;
      continue;
    }
    for (std::size_t j = 0; j < cfg.dim; ++j)
      result.embedding.rows(u, static_cast<Eigen::Index>(j)) = model.vertex[std::size_t{u} * cfg.dim + j];
  }
  if (missing > 0)
    result.warnings.push_back(std::to_string(missing) + " node(s) never appear in a walk and get zero rows");
  return result;
}

EmbeddingMatrix node2vec_embed(const Graph& g, const WalkConfig& cfg) {
  auto corpus = generate_walks(g, cfg);
  return skipgram_train(corpus, g, cfg).embedding;
}

void write_walks(const WalkCorpus& corpus, const Graph& g, std::ostream& out) {
  for (const auto& walk : corpus) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << g.token(walk[i]);
    }
    out << '\n';
  }
}

} // namespace graphembed
