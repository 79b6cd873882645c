#include <doctest.h>

#include <numeric>

#include "graphembed/line.hpp"
#include "support/graphs.hpp"

using namespace graphembed;
using testsupport::from_pairs;

namespace {

double cosine(const EmbeddingMatrix& e, NodeIndex a, NodeIndex b) {
  const auto x = e.rows.row(a), y = e.rows.row(b);
  return x.dot(y) / (x.norm() * y.norm());
}

} // namespace

TEST_CASE("output shape and finiteness") {
  auto g = testsupport::barbell_graph();
  LineConfig cfg;
  cfg.dim = 16;
  for (auto order : {LineOrder::First, LineOrder::Second}) {
    cfg.order = order;
    auto e = line_train(g, cfg);
    CHECK(e.num_nodes() == 10);
    CHECK(e.dim() == 16);
    CHECK(e.all_finite());
    CHECK(e.algorithm == (order == LineOrder::First ? "line1" : "line2"));
  }
}

TEST_CASE("fixed seed with one worker is bit-identical") {
  Rng rng(3);
  auto g = testsupport::random_graph(rng, 60, 0.08, true);
  LineConfig cfg;
  cfg.dim = 8;
  cfg.seed = 99;
  cfg.order = LineOrder::Second;
  CHECK(line_train(g, cfg).rows == line_train(g, cfg).rows);
  auto other = cfg;
  other.seed = 100;
  CHECK(line_train(g, cfg).rows != line_train(g, other).rows);
}

TEST_CASE("first order pulls edge endpoints together") {
  auto g = from_pairs(false, 4, {{0, 1}, {2, 3}});
  LineConfig cfg;
  cfg.dim = 8;
  cfg.total_samples = 20000;
  cfg.negatives = 2;
  auto e = line_train(g, cfg);
  CHECK(cosine(e, 0, 1) - cosine(e, 0, 2) > 0.3);
}

TEST_CASE("second order places nodes with shared neighbours close") {
  auto g = testsupport::barbell_graph();
  LineConfig cfg;
  cfg.order = LineOrder::Second;
  cfg.dim = 16;
  cfg.total_samples = 200000;
  auto e = line_train(g, cfg);
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (NodeIndex a = 0; a < 10; ++a)
    for (NodeIndex b = a + 1; b < 10; ++b) {
      if ((a < 5) == (b < 5)) intra += cosine(e, a, b), ++ni;
      else inter += cosine(e, a, b), ++nx;
    }
  CHECK(intra / ni > inter / nx);
}

TEST_CASE("learning rate decays linearly to a floor") {
  CHECK(line_learning_rate(0.025, 0, 100) == doctest::Approx(0.025));
  CHECK(line_learning_rate(0.025, 50, 100) == doctest::Approx(0.0125));
  CHECK(line_learning_rate(0.025, 100, 100) == doctest::Approx(0.025 * 1e-4));
}

TEST_CASE("noise table follows degree to the three-quarters power") {
  auto g = testsupport::star_graph(3);
  auto t = noise_table(g);
  const double hub = std::pow(3.0, 0.75), leaf = 1.0;
  CHECK(t.probability(0) == doctest::Approx(hub / (hub + 3 * leaf)));
  CHECK(t.probability(1) == doctest::Approx(leaf / (hub + 3 * leaf)));
}

TEST_CASE("the evaluation-sample loss falls during training") {
  Rng rng(8);
  auto g = testsupport::random_graph(rng, 80, 0.06, false);
  LineConfig cfg;
  cfg.dim = 16;
  cfg.total_samples = 100000;
  LineTrace trace;
  trace.windows = 5;
  line_train(g, cfg, &trace);
  REQUIRE(trace.losses.size() >= 2);
  CHECK(trace.losses.back() < trace.losses.front());
}

TEST_CASE("multiple workers produce a finite embedding") {
  Rng rng(12);
  auto g = testsupport::random_graph(rng, 100, 0.05, false);
  LineConfig cfg;
  cfg.dim = 16;
  cfg.workers = 4;
  CHECK(line_train(g, cfg).all_finite());
}
