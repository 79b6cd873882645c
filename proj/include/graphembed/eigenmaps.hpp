#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "graphembed/eigensolver.hpp"
#include "graphembed/embedding.hpp"
#include "graphembed/graph.hpp"

namespace graphembed {

/// L = I - D^{-1/2} A D^{-1/2} over the weighted adjacency of an undirected graph.
/// Isolated nodes get an identity row and column.
struct NormalizedLaplacian {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd degree;
};

NormalizedLaplacian normalized_laplacian(const Graph& g);

enum class EigenSolverKind { Auto, Dense, Iterative };

struct EigenmapsOptions {
  EigenSolverKind solver = EigenSolverKind::Auto;
  /// Auto switches to the iterative solver at this many non-isolated nodes.
  std::size_t dense_threshold = 2000;
  SubspaceOptions iterative;
};

struct EigenmapsResult {
  EmbeddingMatrix embedding;
  /// Eigenvalue of each embedding column, nondecreasing.
  Eigen::VectorXd eigenvalues;
  /// Number of connected components among non-isolated nodes.
  std::size_t components = 0;
  std::vector<std::string> warnings;
};

/// Spectral embedding: column j is the eigenvector of L with the (j+1)-th smallest
/// eigenvalue, skipping the eigenvector proportional to D^{1/2} 1. With c components the
/// remaining c - 1 null-space directions come first. Each column has unit norm and its
/// largest-magnitude entry positive. Isolated nodes get zero rows.
EigenmapsResult eigenmaps_embed(const Graph& g, std::size_t dim, const EigenmapsOptions& options = {});

} // namespace graphembed
