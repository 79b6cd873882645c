#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphembed/graph.hpp"

namespace graphembed {

enum class Measure { Degree, InDegree, OutDegree, PageRank, Closeness, Betweenness };

std::string_view measure_name(Measure m);
std::optional<Measure> parse_measure(std::string_view name);
/// Degree-family measures take integer values and are histogrammed without binning.
bool is_integer_valued(Measure m);
/// Degree for undirected graphs, in/out-degree for directed ones, then PageRank,
/// closeness and betweenness.
std::vector<Measure> measures_for(const Graph& g);

struct CentralityScores {
  Measure measure = Measure::Degree;
  std::vector<double> values;
  /// Free-form convention notes carried into serialized output (e.g. closeness on
  /// disconnected graphs).
  std::string convention;
};

struct PageRankParams {
  double alpha = 0.85;
  double tolerance = 1e-12;
  int max_iterations = 200;
};

enum class DegreeKind { Total, In, Out };

/// Edge counts per node. Total requires an undirected graph; In/Out require a directed one.
CentralityScores degree_scores(const Graph& g, DegreeKind kind);

/// Power iteration on PR(u) = (1-alpha)/n + alpha * sum_{v -> u} PR(v)/OutDegree(v).
/// Rank held by nodes without out-edges is spread uniformly every iteration.
/// Throws ConvergenceError when the L1 change stays above tolerance.
CentralityScores pagerank(const Graph& g, const PageRankParams& params = {});

/// 1 / (sum of BFS distances to reachable nodes); 0 for nodes that reach nothing.
CentralityScores closeness(const Graph& g, unsigned workers = 1);

/// Unnormalized shortest-path betweenness over ordered (s, t) pairs, endpoints excluded.
/// Brandes accumulation, one BFS per source.
CentralityScores betweenness(const Graph& g, unsigned workers = 1);

CentralityScores compute_centrality(const Graph& g, Measure m, const PageRankParams& pr = {},
                                    unsigned workers = 1);

/// `<node-token> <value>` lines in shortest round-trip form, preceded by `#` header lines.
void write_scores(const CentralityScores& scores, const Graph& g, std::ostream& out);
CentralityScores read_scores(std::istream& in, const Graph& g);

} // namespace graphembed
