#include "graphembed/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <new>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "graphembed/error.hpp"
#include "graphembed/random.hpp"
#include "parallel.hpp"

namespace graphembed {

namespace {

using Eigen::MatrixXd;
using Sparse = Eigen::SparseMatrix<double>;

// Column blocks are fixed-width so each column is computed identically whatever the
// worker count.
constexpr Eigen::Index kColumnBlock = 32;

void multiply(const Sparse& a, const MatrixXd& x, MatrixXd& y, unsigned workers) {
  y.resize(x.rows(), x.cols());
  const auto blocks = static_cast<std::size_t>((x.cols() + kColumnBlock - 1) / kColumnBlock);
  detail::parallel_for(blocks, workers, [&](std::size_t b) {
    const auto start = static_cast<Eigen::Index>(b) * kColumnBlock;
    const auto width = std::min(kColumnBlock, x.cols() - start);
    y.middleCols(start, width).noalias() = a * x.middleCols(start, width);
  });
}

void project_out(const MatrixXd& basis, MatrixXd& x) {
  if (basis.cols() == 0) return;
  x.noalias() -= basis * (basis.transpose() * x);
}

MatrixXd orthonormalize(const MatrixXd& deflate, MatrixXd x) {
  // Two projection passes keep the block orthogonal to the deflated space to working precision.
  project_out(deflate, x);
  project_out(deflate, x);
  Eigen::HouseholderQR<MatrixXd> qr(x);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(x.rows(), x.cols());
  project_out(deflate, q);
  Eigen::HouseholderQR<MatrixXd> qr2(q);
  return qr2.householderQ() * MatrixXd::Identity(x.rows(), x.cols());
}

} // namespace

EigenPairs smallest_eigenpairs(const Sparse& a, int count, const MatrixXd& deflate,
                               double spectrum_upper, const SubspaceOptions& options) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ContractViolation("eigensolver: matrix is not square");
  if (deflate.rows() != n && deflate.cols() != 0)
    throw ContractViolation("eigensolver: deflation basis has the wrong row count");
  const Eigen::Index available = n - deflate.cols();
  if (count < 1 || count > available)
    throw ContractViolation("eigensolver: requested " + std::to_string(count) +
                            " eigenpairs but only " + std::to_string(available) + " exist");

  const int guard = options.guard > 0 ? options.guard : std::max(8, count / 4);
  const Eigen::Index m = std::min<Eigen::Index>(count + guard, available);
  // x, filter scratch (3 blocks), a*x, residual, QR workspace.
  const double bytes = 8.0 * static_cast<double>(n) * static_cast<double>(m) * 8.0;
  if (bytes > static_cast<double>(options.memory_budget))
    throw ResourceError("eigensolver needs about " + std::to_string(bytes / (1 << 20)) +
                        " MiB of block storage, above the configured budget");

  try {
    Rng rng(options.seed);
    MatrixXd x(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.normal();
    x = orthonormalize(deflate, std::move(x));

    MatrixXd ax, y, y_next, scratch;
    Eigen::VectorXd theta;
    EigenPairs result;

    auto rayleigh_ritz = [&] {
      multiply(a, x, ax, options.workers);
      MatrixXd h = x.transpose() * ax;
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
      theta = eig.eigenvalues();
      x = x * eig.eigenvectors();
      ax = ax * eig.eigenvectors();
    };

    rayleigh_ritz();
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
      MatrixXd residual = ax - x * theta.asDiagonal();
      double worst = 0.0;
      for (int j = 0; j < count; ++j) worst = std::max(worst, residual.col(j).norm());
      result.max_residual = worst;
      result.iterations = iter - 1;
      // A block spanning the whole complement makes Rayleigh-Ritz exact.
      if (worst <= options.tolerance || m == available) {
        result.values = theta.head(count);
        result.vectors = x.leftCols(count);
        return result;
      }

      // Chebyshev filter damping [cut, upper]; scaled three-term recurrence.
      const double upper = spectrum_upper;
      const double cut = std::min(theta(m - 1), upper * (1.0 - 1e-6));
      const double low = std::min(theta(0), cut - 1e-12);
      const double e = 0.5 * (upper - cut);
      const double c = 0.5 * (upper + cut);
      double sigma = e / (low - c);
      const double sigma1 = sigma;
      const double tau = 2.0 / sigma1;

      multiply(a, x, scratch, options.workers);
      y = (scratch - c * x) * (sigma1 / e);
      project_out(deflate, y);
      MatrixXd prev = x;
      for (int k = 2; k <= options.filter_degree; ++k) {
        const double sigma_next = 1.0 / (tau - sigma);
        multiply(a, y, scratch, options.workers);
        y_next = (scratch - c * y) * (2.0 * sigma_next / e) - (sigma * sigma_next) * prev;
        project_out(deflate, y_next);
        prev = std::move(y);
        y = std::move(y_next);
        sigma = sigma_next;
      }
      x = orthonormalize(deflate, std::move(y));
      rayleigh_ritz();
    }
    throw ConvergenceError("eigensolver did not converge in " +
                               std::to_string(options.max_iterations) + " sweeps",
                           result.max_residual);
  } catch (const std::bad_alloc&) {
    throw ResourceError("eigensolver ran out of memory for a " + std::to_string(n) + " x " +
                        std::to_string(m) + " block");
  }
}

} // namespace graphembed
