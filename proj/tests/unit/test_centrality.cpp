#include <doctest.h>

#include <numeric>
#include <sstream>

#include "graphembed/centrality.hpp"
#include "graphembed/error.hpp"
#include "oracles/centrality_oracles.hpp"
#include "support/graphs.hpp"

using namespace graphembed;
using testsupport::from_pairs;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST_CASE("degree on a triangle, chain and star") {
  auto tri = testsupport::complete_graph(3);
  CHECK(degree_scores(tri, DegreeKind::Total).values == std::vector<double>{2, 2, 2});

  auto chain = testsupport::path_graph(3, true);
  CHECK(degree_scores(chain, DegreeKind::Out).values == std::vector<double>{1, 1, 0});
  CHECK(degree_scores(chain, DegreeKind::In).values == std::vector<double>{0, 1, 1});

  auto star = testsupport::star_graph(5);
  CHECK(degree_scores(star, DegreeKind::Total).values[0] == 5);
  std::size_t center_edges = 0;
  for (const auto& e : star.edges())
    if (e.source == 0 || e.target == 0) ++center_edges;
  CHECK(center_edges == 5);
}

TEST_CASE("degree kinds check directedness") {
  CHECK_THROWS_AS(degree_scores(testsupport::path_graph(3, true), DegreeKind::Total), ContractViolation);
  CHECK_THROWS_AS(degree_scores(testsupport::path_graph(3, false), DegreeKind::In), ContractViolation);
}

TEST_CASE("measures applicable to a graph") {
  CHECK(measures_for(testsupport::path_graph(3, false)).front() == Measure::Degree);
  auto directed = measures_for(testsupport::path_graph(3, true));
  CHECK(directed[0] == Measure::InDegree);
  CHECK(directed[1] == Measure::OutDegree);
  CHECK(directed.size() == 5);
  for (auto m : directed) CHECK(parse_measure(measure_name(m)) == m);
}

TEST_CASE("pagerank on a directed cycle is uniform for any alpha") {
  auto g = testsupport::cycle_graph(7, true);
  for (double alpha : {0.0, 0.3, 0.85, 0.99}) {
    auto pr = pagerank(g, {alpha, 1e-12, 1000});
    for (double x : pr.values) CHECK(x == doctest::Approx(1.0 / 7).epsilon(1e-12));
  }
}

TEST_CASE("pagerank with alpha zero is exactly uniform") {
  auto g = from_pairs(true, 5, {{0, 1}, {0, 2}, {3, 0}});
  auto pr = pagerank(g, {0.0, 1e-12, 200});
  for (double x : pr.values) CHECK(x == 1.0 / 5);
}

TEST_CASE("pagerank matches the dense fixed point on the four-node example") {
  // a->b, a->c, b->c, c->a
  auto g = from_pairs(true, 3, {{0, 1}, {0, 2}, {1, 2}, {2, 0}});
  auto pr = pagerank(g);
  auto ref = oracle::pagerank_fixed_point(g, 0.85);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(pr.values[i] - ref[i]) <= 1e-10);
  CHECK(std::abs(sum(pr.values) - 1.0) <= 1e-9);
}

TEST_CASE("pagerank with dangling nodes sums to one and matches the oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testsupport::random_graph(rng, 1 + rng.below(10), 0.2, true);
    auto pr = pagerank(g);
    auto ref = oracle::pagerank_fixed_point(g, 0.85);
    CHECK(std::abs(sum(pr.values) - 1.0) <= 1e-9);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(pr.values[i] - ref[i]) <= 1e-8);
  }
}

TEST_CASE("pagerank raises when it cannot converge") {
  auto g = from_pairs(true, 4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}});
  CHECK_THROWS_AS(pagerank(g, {0.85, 1e-14, 2}), ConvergenceError);
}

TEST_CASE("closeness examples") {
  auto star = testsupport::star_graph(4);
  CHECK(closeness(star).values[0] == doctest::Approx(1.0 / 4));

  auto path = testsupport::path_graph(3);
  CHECK(closeness(path).values[0] == doctest::Approx(1.0 / 3));

  auto split = from_pairs(false, 5, {{0, 1}, {1, 2}, {3, 4}});
  auto c = closeness(split);
  CHECK(c.values[0] == doctest::Approx(1.0 / 3));
  CHECK(c.values[3] == doctest::Approx(1.0));
  for (double x : c.values) CHECK(std::isfinite(x));
  CHECK_FALSE(c.convention.empty());

  auto isolated = from_pairs(true, 3, {{0, 1}});
  CHECK(closeness(isolated).values[2] == 0.0);
  CHECK(closeness(isolated).values[1] == 0.0);
}

TEST_CASE("betweenness examples") {
  for (double x : betweenness(testsupport::complete_graph(4)).values) CHECK(x == 0.0);

  auto chain = testsupport::path_graph(3, true);
  CHECK(betweenness(chain).values[1] == 1.0);

  // Ordered pairs: (a,c), (c,a), (a,d), (d,a) all pass through b.
  auto p4 = testsupport::path_graph(4);
  auto bc = betweenness(p4).values;
  CHECK(bc[1] == 4.0);
  CHECK(bc[2] == 4.0);
  CHECK(bc[0] == 0.0);

  auto star = testsupport::star_graph(4);
  CHECK(betweenness(star).values[0] == 12.0);
}

TEST_CASE("betweenness and closeness match exhaustive oracles") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const bool directed = trial % 2 == 0;
    auto g = testsupport::random_graph(rng, 2 + rng.below(7), 0.35, directed);
    auto bc = betweenness(g).values;
    auto ref = oracle::betweenness(g);
    for (std::size_t i = 0; i < bc.size(); ++i) CHECK(std::abs(bc[i] - boost::rational_cast<double>(ref[i])) <= 1e-9);
    auto cl = closeness(g).values;
    auto cref = oracle::closeness(g);
    for (std::size_t i = 0; i < cl.size(); ++i) CHECK(std::abs(cl[i] - cref[i]) <= 1e-12);
  }
}

TEST_CASE("worker count does not change results") {
  Rng rng(23);
  auto g = testsupport::random_graph(rng, 300, 0.02, false);
  CHECK(betweenness(g, 1).values == betweenness(g, 4).values);
  CHECK(closeness(g, 1).values == closeness(g, 3).values);
}

TEST_CASE("scores round-trip through text") {
  auto g = testsupport::path_graph(5);
  auto pr = pagerank(g);
  std::ostringstream out;
  write_scores(pr, g, out);
  std::istringstream in(out.str());
  auto back = read_scores(in, g);
  CHECK(back.measure == Measure::PageRank);
  CHECK(back.values == pr.values);

  auto cl = closeness(g);
  std::ostringstream cout_;
  write_scores(cl, g, cout_);
  CHECK(cout_.str().find("# convention=") != std::string::npos);
}
