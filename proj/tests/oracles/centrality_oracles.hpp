#pragma once

// Brute-force references for the centrality measures. Deliberately naive: dense matrices,
// Floyd-Warshall distances and explicit enumeration of every shortest path.

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "graphembed/graph.hpp"

namespace oracle {

using graphembed::Graph;
using graphembed::NodeIndex;

/// PageRank as the exact solution of the linear fixed point
///   x = alpha * (A^T D^-1 x + (dangling . x) / n) + (1 - alpha) / n,  sum(x) = 1.
inline std::vector<double> pagerank_fixed_point(const Graph& g, double alpha) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto out = g.out_neighbors(static_cast<NodeIndex>(v));
    if (out.empty()) {
      for (Eigen::Index u = 0; u < n; ++u) m(u, v) += 1.0 / static_cast<double>(n);
    } else {
      for (auto u : out) m(u, v) += 1.0 / static_cast<double>(out.size());
    }
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - alpha * m;
  Eigen::VectorXd b = Eigen::VectorXd::Constant(n, (1.0 - alpha) / static_cast<double>(n));
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return {x.data(), x.data() + n};
}

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

/// All-pairs hop distances by Floyd-Warshall over the out-arcs.
inline std::vector<std::vector<int>> distance_matrix(const Graph& g) {
  const auto n = g.num_nodes();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kUnreachable));
  for (NodeIndex u = 0; u < n; ++u) {
    d[u][u] = 0;
    for (auto v : g.out_neighbors(u)) d[u][v] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline std::vector<double> closeness(const Graph& g) {
  const auto d = distance_matrix(g);
  std::vector<double> c(g.num_nodes(), 0.0);
  for (std::size_t u = 0; u < d.size(); ++u) {
    long long total = 0;
    for (std::size_t v = 0; v < d.size(); ++v)
      if (v != u && d[u][v] < kUnreachable) total += d[u][v];
    c[u] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
  }
  return c;
}

/// Enumerates every shortest s-t path for every ordered pair and adds, in exact rational
/// arithmetic, the fraction of paths through each interior node.
inline std::vector<boost::rational<long long>> betweenness(const Graph& g) {
  const auto n = g.num_nodes();
  const auto d = distance_matrix(g);
  std::vector<boost::rational<long long>> bc(n, 0);
  std::vector<NodeIndex> path;
  for (NodeIndex s = 0; s < n; ++s)
    for (NodeIndex t = 0; t < n; ++t) {
      if (s == t || d[s][t] >= kUnreachable) continue;
      std::vector<long long> through(n, 0);
      long long paths = 0;
      path.assign(1, s);
      std::function<void(NodeIndex)> walk = [&](NodeIndex u) {
        if (u == t) {
          ++paths;
          for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
          return;
        }
        for (auto v : g.out_neighbors(u)) {
          if (d[s][v] != d[s][u] + 1 || d[v][t] != d[u][t] - 1) continue;
          path.push_back(v);
          walk(v);
          path.pop_back();
        }
      };
      walk(s);
      for (std::size_t v = 0; v < n; ++v)
        if (through[v] > 0) bc[v] += boost::rational<long long>(through[v], paths);
    }
  return bc;
}

} // namespace oracle
