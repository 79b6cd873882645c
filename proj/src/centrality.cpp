#include "graphembed/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>

#include "graphembed/error.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace graphembed {

namespace {

constexpr std::pair<Measure, std::string_view> kMeasureNames[] = {
    {Measure::Degree, "degree"},       {Measure::InDegree, "indegree"},
    {Measure::OutDegree, "outdegree"}, {Measure::PageRank, "pagerank"},
    {Measure::Closeness, "closeness"}, {Measure::Betweenness, "betweenness"},
};

constexpr const char* kClosenessConvention = "closeness-sums-reachable-targets-only";

// Sources per reduction chunk. Fixed, so summation order never depends on worker count.
constexpr std::size_t kSourceChunk = 64;

} // namespace

std::string_view measure_name(Measure m) {
  for (auto [measure, name] : kMeasureNames)
    if (measure == m) return name;
  return "unknown";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (auto [measure, n] : kMeasureNames)
    if (n == name) return measure;
  return std::nullopt;
}

bool is_integer_valued(Measure m) {
  return m == Measure::Degree || m == Measure::InDegree || m == Measure::OutDegree;
}

std::vector<Measure> measures_for(const Graph& g) {
  if (g.directed())
    return {Measure::InDegree, Measure::OutDegree, Measure::PageRank, Measure::Closeness,
            Measure::Betweenness};
  return {Measure::Degree, Measure::PageRank, Measure::Closeness, Measure::Betweenness};
}

CentralityScores degree_scores(const Graph& g, DegreeKind kind) {
  if (kind == DegreeKind::Total && g.directed())
    throw ContractViolation("total degree is defined for undirected graphs; use in/out-degree");
  if (kind != DegreeKind::Total && !g.directed())
    throw ContractViolation("in/out-degree is defined for directed graphs; use degree");
  CentralityScores s;
  s.measure = kind == DegreeKind::Total ? Measure::Degree
              : kind == DegreeKind::In  ? Measure::InDegree
                                        : Measure::OutDegree;
  s.values.resize(g.num_nodes());
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    s.values[u] = static_cast<double>(kind == DegreeKind::In ? g.in_degree(u) : g.out_degree(u));
  return s;
}

CentralityScores pagerank(const Graph& g, const PageRankParams& params) {
  const auto n = g.num_nodes();
  if (n == 0) throw ContractViolation("pagerank: empty graph");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw ContractViolation("pagerank: alpha must lie in [0, 1]");
  if (!(params.tolerance > 0.0)) throw ContractViolation("pagerank: tolerance must be positive");

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n), share(n);
  double residual = 0.0;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    double dangling = 0.0;
    for (NodeIndex v = 0; v < n; ++v) {
      auto out = g.out_degree(v);
      if (out == 0) {
        dangling += rank[v];
        share[v] = 0.0;
      } else {
        share[v] = rank[v] / static_cast<double>(out);
      }
    }
    const double base = (1.0 - params.alpha) * inv_n + params.alpha * dangling * inv_n;
    residual = 0.0;
    for (NodeIndex u = 0; u < n; ++u) {
      double sum = 0.0;
      for (auto v : g.in_neighbors(u)) sum += share[v];
      next[u] = base + params.alpha * sum;
      residual += std::abs(next[u] - rank[u]);
    }
    rank.swap(next);
    if (residual < params.tolerance) {
      CentralityScores s;
      s.measure = Measure::PageRank;
      s.values = std::move(rank);
      return s;
    }
  }
  throw ConvergenceError("pagerank did not converge in " + std::to_string(params.max_iterations) +
                             " iterations",
                         residual);
}

namespace {

// Unweighted BFS from `source` along out-edges. dist[v] = -1 marks unreachable.
void bfs_distances(const Graph& g, NodeIndex source, std::vector<int>& dist,
                   std::vector<NodeIndex>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto v = queue[head];
    for (auto w : g.out_neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

} // namespace

CentralityScores closeness(const Graph& g, unsigned workers) {
  const auto n = g.num_nodes();
  CentralityScores s;
  s.measure = Measure::Closeness;
  s.convention = kClosenessConvention;
  s.values.assign(n, 0.0);
  const std::size_t chunks = (n + kSourceChunk - 1) / kSourceChunk;
  detail::parallel_for(chunks, workers, [&](std::size_t chunk) {
    std::vector<int> dist(n);
    std::vector<NodeIndex> queue;
    queue.reserve(n);
    const auto end = std::min(n, (chunk + 1) * kSourceChunk);
    for (auto u = static_cast<NodeIndex>(chunk * kSourceChunk); u < end; ++u) {
      bfs_distances(g, u, dist, queue);
      long long total = 0;
      for (auto v : queue) total += dist[v];
      s.values[u] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
    }
  });
  return s;
}

CentralityScores betweenness(const Graph& g, unsigned workers) {
  const auto n = g.num_nodes();
  const std::size_t chunks = (n + kSourceChunk - 1) / kSourceChunk;
  std::vector<std::vector<double>> partial(chunks);

  detail::parallel_for(chunks, workers, [&](std::size_t chunk) {
    auto& acc = partial[chunk];
    acc.assign(n, 0.0);
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    const auto end = std::min(n, (chunk + 1) * kSourceChunk);
    for (auto s = static_cast<NodeIndex>(chunk * kSourceChunk); s < end; ++s) {
      std::fill(dist.begin(), dist.end(), -1);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      order.clear();
      dist[s] = 0;
      sigma[s] = 1.0;
      order.push_back(s);
      for (std::size_t head = 0; head < order.size(); ++head) {
        auto v = order[head];
        for (auto w : g.out_neighbors(v)) {
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            order.push_back(w);
          }
          if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
      }
      // Dependencies in reverse BFS order; predecessors of w are in-neighbors one level up.
      for (auto v : order) delta[v] = 0.0;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto w = *it;
        for (auto v : g.in_neighbors(w)) {
          if (dist[v] >= 0 && dist[v] + 1 == dist[w])
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if (w != s) acc[w] += delta[w];
      }
    }
  });

  CentralityScores out;
  out.measure = Measure::Betweenness;
  out.values.assign(n, 0.0);
  for (const auto& acc : partial)
    for (std::size_t u = 0; u < n; ++u) out.values[u] += acc[u];
  return out;
}

CentralityScores compute_centrality(const Graph& g, Measure m, const PageRankParams& pr,
                                    unsigned workers) {
  switch (m) {
  case Measure::Degree: return degree_scores(g, DegreeKind::Total);
  case Measure::InDegree: return degree_scores(g, DegreeKind::In);
  case Measure::OutDegree: return degree_scores(g, DegreeKind::Out);
  case Measure::PageRank: return pagerank(g, pr);
  case Measure::Closeness: return closeness(g, workers);
  case Measure::Betweenness: return betweenness(g, workers);
  }
  throw ContractViolation("unknown centrality measure");
}

void write_scores(const CentralityScores& scores, const Graph& g, std::ostream& out) {
  out << "# measure=" << measure_name(scores.measure) << '\n';
  if (!scores.convention.empty()) out << "# convention=" << scores.convention << '\n';
  for (NodeIndex u = 0; u < scores.values.size(); ++u)
    out << g.token(u) << ' ' << detail::format_double(scores.values[u]) << '\n';
}

CentralityScores read_scores(std::istream& in, const Graph& g) {
  CentralityScores s;
  std::optional<Measure> measure;
  s.values.assign(g.num_nodes(), 0.0);
  std::vector<bool> seen(g.num_nodes(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# measure=", 0) == 0) {
      measure = parse_measure(std::string_view(line).substr(10));
      if (!measure) throw ParseError(line_no, "unknown measure in header");
      continue;
    }
    if (line.rfind("# convention=", 0) == 0) {
      s.convention = line.substr(13);
      continue;
    }
    auto fields = detail::split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) throw ParseError(line_no, "expected '<node> <value>'");
    auto node = g.nodes().find(fields[0]);
    if (!node) throw ParseError(line_no, "unknown node '" + std::string(fields[0]) + "'");
    auto value = detail::parse_double(fields[1]);
    if (!value) throw ParseError(line_no, "non-numeric score");
    s.values[*node] = *value;
    seen[*node] = true;
  }
  if (!measure) throw ParseError(0, "scores file lacks a '# measure=' header");
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ParseError(0, "scores file does not cover every node");
  s.measure = *measure;
  return s;
}

} // namespace graphembed
