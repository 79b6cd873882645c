#include "graphembed/eigenmaps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "graphembed/error.hpp"

namespace graphembed {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

VectorXd weighted_degree(const Graph& g) {
  VectorXd deg = VectorXd::Zero(static_cast<Eigen::Index>(g.num_nodes()));
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    for (double w : g.out_weights(u)) deg(u) += w;
  return deg;
}

void require_undirected(const Graph& g) {
  if (g.directed())
    throw ContractViolation("Laplacian eigenmaps need an undirected graph; convert it first");
}

void fix_sign(Eigen::Ref<VectorXd> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

} // namespace

NormalizedLaplacian normalized_laplacian(const Graph& g) {
  require_undirected(g);
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  NormalizedLaplacian lap;
  lap.degree = weighted_degree(g);
  VectorXd inv_sqrt(n);
  for (Eigen::Index u = 0; u < n; ++u)
    inv_sqrt(u) = lap.degree(u) > 0 ? 1.0 / std::sqrt(lap.degree(u)) : 0.0;

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n) + 2 * g.num_edges());
  for (Eigen::Index u = 0; u < n; ++u) entries.emplace_back(u, u, 1.0);
  for (const auto& e : g.edges()) {
    const double v = -e.weight * inv_sqrt(e.source) * inv_sqrt(e.target);
    entries.emplace_back(e.source, e.target, v);
    entries.emplace_back(e.target, e.source, v);
  }
  lap.matrix.resize(n, n);
  lap.matrix.setFromTriplets(entries.begin(), entries.end());
  return lap;
}

EigenmapsResult eigenmaps_embed(const Graph& g, std::size_t dim, const EigenmapsOptions& options) {
  require_undirected(g);
  const auto n = g.num_nodes();
  if (dim == 0) throw ContractViolation("eigenmaps: dimension must be positive");
  if (dim >= n)
    throw ContractViolation("eigenmaps: dimension " + std::to_string(dim) +
                            " must be smaller than the node count " + std::to_string(n));

  EigenmapsResult result;
  const VectorXd degree = weighted_degree(g);

  // Local indexing over non-isolated nodes.
  std::vector<Eigen::Index> local(n, -1);
  std::vector<NodeIndex> active;
  for (NodeIndex u = 0; u < n; ++u)
    if (degree(u) > 0) {
      local[u] = static_cast<Eigen::Index>(active.size());
      active.push_back(u);
    }
  const auto isolated = n - active.size();
  if (isolated > 0)
    result.warnings.push_back(std::to_string(isolated) +
                              " isolated node(s) receive zero embedding rows");
  const auto m = static_cast<Eigen::Index>(active.size());
  if (m < 2) throw ContractViolation("eigenmaps: graph has no edges");
  const auto available = static_cast<std::size_t>(m - 1);
  if (dim > available)
    throw ContractViolation("eigenmaps: dimension " + std::to_string(dim) + " exceeds the " +
                            std::to_string(available) + " nontrivial eigenpairs available");

  VectorXd sqrt_deg(m);
  for (Eigen::Index i = 0; i < m; ++i) sqrt_deg(i) = std::sqrt(degree(active[i]));

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(m) + 2 * g.num_edges());
  for (Eigen::Index i = 0; i < m; ++i) entries.emplace_back(i, i, 1.0);
  for (const auto& e : g.edges()) {
    const auto s = local[e.source];
    const auto t = local[e.target];
    const double v = -e.weight / (sqrt_deg(s) * sqrt_deg(t));
    entries.emplace_back(s, t, v);
    entries.emplace_back(t, s, v);
  }
  Eigen::SparseMatrix<double> lap(m, m);
  lap.setFromTriplets(entries.begin(), entries.end());

  // Connected components; the null space of L is spanned by D^{1/2} restricted to each.
  std::vector<int> component(static_cast<std::size_t>(m), -1);
  std::vector<std::vector<Eigen::Index>> members;
  for (Eigen::Index start = 0; start < m; ++start) {
    if (component[start] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    auto& list = members.back();
    component[start] = id;
    list.push_back(start);
    for (std::size_t head = 0; head < list.size(); ++head)
      for (auto w : g.out_neighbors(active[list[head]])) {
        const auto lw = local[w];
        if (component[lw] < 0) {
          component[lw] = id;
          list.push_back(lw);
        }
      }
  }
  result.components = members.size();
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  // Orthonormal null-space basis whose first column is the trivial D^{1/2} 1 direction.
  const auto c = static_cast<Eigen::Index>(members.size());
  MatrixXd null_basis(m, c);
  null_basis.col(0) = sqrt_deg.normalized();
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < c && filled < c; ++k) {
    VectorXd v = VectorXd::Zero(m);
    for (auto i : members[static_cast<std::size_t>(k)]) v(i) = sqrt_deg(i);
    for (int pass = 0; pass < 2; ++pass)
      v -= null_basis.leftCols(filled) * (null_basis.leftCols(filled).transpose() * v);
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    null_basis.col(filled++) = v / norm;
  }

  const auto from_null = std::min<std::size_t>(dim, static_cast<std::size_t>(c - 1));
  const auto needed = static_cast<Eigen::Index>(dim - from_null);

  MatrixXd columns(m, static_cast<Eigen::Index>(dim));
  VectorXd values = VectorXd::Zero(static_cast<Eigen::Index>(dim));
  columns.leftCols(static_cast<Eigen::Index>(from_null)) =
      null_basis.middleCols(1, static_cast<Eigen::Index>(from_null));

  if (needed > 0) {
    const bool dense = options.solver == EigenSolverKind::Dense ||
                       (options.solver == EigenSolverKind::Auto &&
                        static_cast<std::size_t>(m) < options.dense_threshold);
    if (dense) {
      // Projected operator: the null space maps to 0 and is skipped by count.
      MatrixXd proj = MatrixXd(lap);
      MatrixXd pb = proj * null_basis;
      proj -= pb * null_basis.transpose();
      proj -= null_basis * pb.transpose();
      proj += null_basis * (null_basis.transpose() * pb) * null_basis.transpose();
      proj = 0.5 * (proj + proj.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(proj);
      if (eig.info() != Eigen::Success)
        throw ConvergenceError("dense eigensolver failed", std::nan(""));
      // Null-space directions sit at eigenvalue 0 while the complement is strictly
      // positive, so the first c eigenvalues belong to the null space.
      values.tail(needed) = eig.eigenvalues().segment(c, needed);
      columns.rightCols(needed) = eig.eigenvectors().middleCols(c, needed);
    } else {
      auto pairs = smallest_eigenpairs(lap, static_cast<int>(needed), null_basis, 2.0,
                                       options.iterative);
      values.tail(needed) = pairs.values;
      columns.rightCols(needed) = pairs.vectors;
    }
  }

  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    columns.col(j).normalize();
    fix_sign(columns.col(j));
  }

  result.eigenvalues = values;
  result.embedding.algorithm = "eigenmaps";
  result.embedding.rows = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m; ++i) result.embedding.rows.row(active[i]) = columns.row(i);
  return result;
}

} // namespace graphembed
