#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphembed/embedding.hpp"
#include "graphembed/graph.hpp"
#include "graphembed/random.hpp"

namespace graphembed {

struct WalkConfig {
  double p = 1.0;
  double q = 1.0;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  std::size_t window = 10;
  int negatives = 5;
  std::size_t dim = 128;
  std::size_t epochs = 1;
  double initial_rate = 0.025;
  double noise_exponent = 0.75;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Precompute per-arc alias tables when sum over arcs of |N(cur)| stays below this.
  std::size_t alias_budget = 50'000'000;
};

using Walk = std::vector<NodeIndex>;
using WalkCorpus = std::vector<Walk>;

/// Unnormalized next-step weights over out_neighbors(cur) after arriving from `prev`:
/// edge weight times 1/p for prev itself, 1 for nodes adjacent to prev (either
/// direction), 1/q otherwise.
std::vector<double> transition_weights(const Graph& g, NodeIndex prev, NodeIndex cur, double p,
                                       double q);

/// walks_per_node walks from every node with out-neighbors, grouped by round: walk
/// r * (#eligible) + i starts at the i-th eligible node. The first step is weighted by
/// edge weight, later steps by transition_weights. Walks stop early at nodes without
/// out-neighbors. Each walk draws from its own stream seeded by (seed, start, round).
WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg);

/// Skip-gram with negative sampling over a fixed window; negatives come from the
/// degree^0.75 noise table. Nodes absent from every walk keep zero rows.
struct SkipGramResult {
  EmbeddingMatrix embedding;
  std::vector<std::string> warnings;
};
SkipGramResult skipgram_train(const WalkCorpus& corpus, const Graph& g, const WalkConfig& cfg);

/// Walk generation followed by skip-gram training.
EmbeddingMatrix node2vec_embed(const Graph& g, const WalkConfig& cfg);

/// One walk per line, node tokens separated by spaces.
void write_walks(const WalkCorpus& corpus, const Graph& g, std::ostream& out);

} // namespace graphembed
