#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "graphembed/graph.hpp"

namespace graphembed {

/// |V| x d matrix; row u is the embedding of node u.
struct EmbeddingMatrix {
  Eigen::MatrixXd rows;
  /// Producing algorithm (e.g. "eigenmaps", "line1").
  std::string algorithm;
  /// Hash of the configuration that produced the matrix.
  std::string config_hash;

  std::size_t num_nodes() const noexcept { return static_cast<std::size_t>(rows.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rows.cols()); }
  bool all_finite() const { return rows.allFinite(); }
};

/// Word-vector text convention: `<num_nodes> <dim>` then `<token> <v1> ... <vd>` per node.
void write_embedding(const EmbeddingMatrix& emb, const Graph& g, std::ostream& out);
EmbeddingMatrix read_embedding(std::istream& in, const Graph& g);

/// Scales each row to unit L2 norm; all-zero rows stay zero.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& rows);

} // namespace graphembed
