#include "graphembed/embedding.hpp"

#include <istream>
#include <ostream>

#include "graphembed/error.hpp"
#include "text_util.hpp"

namespace graphembed {

void write_embedding(const EmbeddingMatrix& emb, const Graph& g, std::ostream& out) {
  out << emb.num_nodes() << ' ' << emb.dim() << '\n';
  for (Eigen::Index u = 0; u < emb.rows.rows(); ++u) {
    out << g.token(static_cast<NodeIndex>(u));
    for (Eigen::Index j = 0; j < emb.rows.cols(); ++j)
      out << ' ' << detail::format_double(emb.rows(u, j));
    out << '\n';
  }
}

EmbeddingMatrix read_embedding(std::istream& in, const Graph& g) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing '<num_nodes> <dim>' header");
  auto header = detail::split_fields(line);
  if (header.size() != 2) throw ParseError(1, "malformed embedding header");
  auto n = detail::parse_int(header[0]);
  auto d = detail::parse_int(header[1]);
  if (!n || !d || *n < 0 || *d < 0) throw ParseError(1, "malformed embedding header");
  if (static_cast<std::size_t>(*n) != g.num_nodes())
    throw ParseError(1, "embedding has " + std::to_string(*n) + " rows, graph has " +
                            std::to_string(g.num_nodes()) + " nodes");

  EmbeddingMatrix emb;
  emb.rows = Eigen::MatrixXd::Zero(*n, *d);
  std::vector<bool> seen(g.num_nodes(), false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != static_cast<std::size_t>(*d) + 1)
      throw ParseError(line_no, "expected token plus " + std::to_string(*d) + " values");
    auto node = g.nodes().find(fields[0]);
    if (!node) throw ParseError(line_no, "unknown node '" + std::string(fields[0]) + "'");
    if (seen[*node]) throw ParseError(line_no, "node listed twice");
    seen[*node] = true;
    for (std::int64_t j = 0; j < *d; ++j) {
      auto v = detail::parse_double(fields[static_cast<std::size_t>(j) + 1]);
      if (!v) throw ParseError(line_no, "non-numeric embedding entry");
      emb.rows(*node, j) = *v;
    }
  }
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    if (!seen[u]) throw ParseError(0, "node '" + g.token(u) + "' missing from embedding file");
  return emb;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& rows) {
  Eigen::MatrixXd out = rows;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

} // namespace graphembed
