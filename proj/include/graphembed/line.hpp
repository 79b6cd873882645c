#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphembed/alias_table.hpp"
#include "graphembed/embedding.hpp"
#include "graphembed/graph.hpp"
#include "graphembed/random.hpp"

namespace graphembed {

enum class LineOrder { First, Second };

struct LineConfig {
  LineOrder order = LineOrder::First;
  std::size_t dim = 128;
  int negatives = 5;
  double initial_rate = 0.025;
  /// Edge samples (SGD steps). 0 means 100 x |E|.
  std::uint64_t total_samples = 0;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  double noise_exponent = 0.75;
};

/// Vertex embeddings, plus context embeddings for second-order proximity.
struct LineModel {
  std::size_t dim = 0;
  std::vector<float> vertex;
  std::vector<float> context;

  /// Vertex rows uniform in (-0.5/dim, 0.5/dim); context rows zero.
  static LineModel initialize(std::size_t num_nodes, std::size_t dim, Rng& rng);

  float* vertex_row(NodeIndex u) { return vertex.data() + std::size_t{u} * dim; }
  float* context_row(NodeIndex u) { return context.data() + std::size_t{u} * dim; }
  bool all_finite() const;
};

/// Noise distribution over nodes, proportional to weighted (in + out) degree ^ exponent.
AliasTable noise_table(const Graph& g, double exponent = 0.75);

/// Positive update on (u, v) plus `negatives` noise updates on (u, n_k). First order
/// pairs u's vertex row with the targets' vertex rows; second order with their context
/// rows. `scratch` needs model.dim floats.
void sgns_step(LineModel& model, NodeIndex u, NodeIndex v, const AliasTable& noise, float rate,
                LineOrder order, int negatives, Rng& rng, std::span<float> scratch);

/// Loss of a fixed evaluation sample recorded at evenly spaced points of training.
struct LineTrace {
  std::size_t windows = 0;
  std::size_t sample_size = 1000;
  std::vector<double> losses;
};

/// Linear learning-rate decay rho0 * (1 - t / T), floored at rho0 * 1e-4.
double line_learning_rate(double initial, std::uint64_t step, std::uint64_t total);

/// Trains on edges drawn proportionally to weight (both orientations of undirected edges).
/// Bit-reproducible for a fixed seed with one worker. `trace` requires one worker.
EmbeddingMatrix line_train(const Graph& g, const LineConfig& cfg, LineTrace* trace = nullptr);

} // namespace graphembed
