#pragma once

#include <cstdint>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace graphembed {

struct SubspaceOptions {
  /// Extra block vectors beyond the requested count; 0 picks max(8, count / 4).
  int guard = 0;
  int filter_degree = 16;
  int max_iterations = 400;
  /// Converged once every wanted Ritz pair has ||A x - theta x|| below this.
  double tolerance = 1e-10;
  std::uint64_t seed = 0x5eed;
  unsigned workers = 1;
  /// Refuse to allocate more than this many bytes of block storage.
  std::size_t memory_budget = std::size_t{6} << 30;
};

struct EigenPairs {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // orthonormal columns
  int iterations = 0;
  double max_residual = 0.0;
};

/// Smallest `count` eigenpairs of the symmetric matrix `a`, whose spectrum must lie in
/// [0, spectrum_upper], restricted to the orthogonal complement of the orthonormal
/// columns of `deflate`.
///
/// Chebyshev-filtered subspace iteration: each sweep applies a Chebyshev polynomial in
/// `a` that damps [cut, spectrum_upper], where cut is the largest Ritz value of the
/// block, then performs Rayleigh-Ritz on the filtered block. Deterministic for a fixed
/// seed regardless of `workers`.
EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int count,
                               const Eigen::MatrixXd& deflate, double spectrum_upper,
                               const SubspaceOptions& options = {});

} // namespace graphembed
