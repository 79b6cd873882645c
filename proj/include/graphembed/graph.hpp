#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace graphembed {

using NodeIndex = std::uint32_t;
using ClassId = std::uint32_t;

struct Edge {
  NodeIndex source = 0;
  NodeIndex target = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Bijection between opaque node tokens from the input files and dense indices [0, n).
class NodeDictionary {
public:
  NodeDictionary() = default;
  explicit NodeDictionary(std::vector<std::string> tokens);

  /// Index of `token`, registering it with the next free index when unseen.
  NodeIndex intern(std::string_view token);
  std::optional<NodeIndex> find(std::string_view token) const;

  const std::string& token(NodeIndex index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, NodeIndex> index_;
};

/// Immutable sparse graph in compressed-row form.
///
/// Undirected graphs store each edge once with source < target and expose symmetric
/// neighbor lists. Neighbor lists are sorted by index. Self-loops and duplicate
/// (source, target) pairs never survive construction.
class Graph {
public:
  Graph() = default;

  /// Builds a graph over `nodes`. Self-loops are dropped. Duplicates keep the first weight,
  /// or the summed weight when `accumulate_weights` is set. Non-positive weights throw.
  static Graph build(bool directed, NodeDictionary nodes, std::vector<Edge> edges,
                     bool accumulate_weights = false);

  bool directed() const noexcept { return directed_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// Stored edges in (source, target) order.
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeIndex> out_neighbors(NodeIndex u) const;
  std::span<const double> out_weights(NodeIndex u) const;
  std::span<const NodeIndex> in_neighbors(NodeIndex u) const;
  std::span<const double> in_weights(NodeIndex u) const;

  std::size_t out_degree(NodeIndex u) const { return out_neighbors(u).size(); }
  std::size_t in_degree(NodeIndex u) const { return in_neighbors(u).size(); }

  /// True when u -> v is an edge (either orientation for undirected graphs).
  bool has_edge(NodeIndex u, NodeIndex v) const;
  /// True when u and v are joined by an edge in either direction.
  bool adjacent(NodeIndex u, NodeIndex v) const { return has_edge(u, v) || has_edge(v, u); }

  const NodeDictionary& nodes() const noexcept { return nodes_; }
  const std::string& token(NodeIndex u) const { return nodes_.token(u); }

  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

private:
  bool directed_ = false;
  NodeDictionary nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeIndex> out_targets_;
  std::vector<double> out_weights_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeIndex> in_sources_;
  std::vector<double> in_weights_;
  std::size_t self_loops_dropped_ = 0;
  std::size_t duplicates_dropped_ = 0;
};

struct IngestOptions {
  bool directed = false;
  bool accumulate_weights = false;
};

struct IngestStats {
  std::size_t edge_lines = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

struct ParsedGraph {
  Graph graph;
  IngestStats stats;
};

/// Reads `<src> <dst> [weight]` lines; `#` lines and blank lines are skipped. Nodes are
/// indexed in order of first appearance, after any `known_nodes` registered up front.
ParsedGraph parse_edge_list(std::istream& in, const IngestOptions& options,
                            std::span<const std::string> known_nodes = {});
ParsedGraph parse_edge_list(std::string_view text, const IngestOptions& options,
                            std::span<const std::string> known_nodes = {});

/// Writes edges sorted by (source index, target index); weights are written only when
/// some edge has weight != 1.
void serialize_edge_list(const Graph& g, std::ostream& out);
std::string serialize_edge_list(const Graph& g);

/// Relabels nodes in order of first appearance in the canonical edge listing, dropping
/// isolated nodes. parse_edge_list(serialize_edge_list(g)) reproduces a canonical graph.
Graph canonicalize(const Graph& g);

/// Ignores edge directions; reciprocal arcs collapse into one edge carrying the larger weight.
Graph to_undirected(const Graph& g);

/// Single-label class assignment covering every node of a graph.
struct LabelTable {
  std::vector<ClassId> labels;
  std::vector<std::string> class_names;

  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::size_t size() const noexcept { return labels.size(); }
  ClassId operator[](NodeIndex u) const { return labels[u]; }
};

/// Reads `<node> <class>` lines. Class tokens are sorted (numerically when all are
/// integers) and mapped to contiguous ids.
LabelTable parse_labels(std::istream& in, const Graph& g);
LabelTable parse_labels(std::string_view text, const Graph& g);
void serialize_labels(const LabelTable& labels, const Graph& g, std::ostream& out);

} // namespace graphembed
