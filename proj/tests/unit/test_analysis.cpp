#include <doctest.h>

#include <sstream>

#include "graphembed/analysis.hpp"
#include "graphembed/error.hpp"

using namespace graphembed;

namespace {

EvalReport report_with(const std::vector<bool>& correct) {
  EvalReport r;
  for (std::size_t i = 0; i < correct.size(); ++i) r.outcomes.push_back({0, correct[i] ? 0u : 1u, static_cast<int>(i % 5)});
  return r;
}

CentralityScores scores(Measure m, std::vector<double> v) {
  CentralityScores s;
  s.measure = m;
  s.values = std::move(v);
  return s;
}

} // namespace

TEST_CASE("split by correctness") {
  CHECK(split_by_correctness(report_with({true, true, true})).incorrect.empty());
  auto s = split_by_correctness(report_with({true, false, true}));
  CHECK(s.incorrect == std::vector<NodeIndex>{1});
  CHECK(s.correct == std::vector<NodeIndex>{0, 2});

  auto missing = report_with({true, true});
  missing.outcomes[1].fold = -1;
  CHECK_THROWS_AS(split_by_correctness(missing), ContractViolation);
}

TEST_CASE("correct share equals report accuracy") {
  auto r = report_with({true, false, false, true, true, true, false});
  auto s = split_by_correctness(r);
  CHECK(static_cast<double>(s.correct.size()) / 7.0 == doctest::Approx(r.accuracy()));
}

TEST_CASE("degree series counts exact values") {
  auto sc = scores(Measure::Degree, {1, 1, 2, 7});
  std::vector<NodeIndex> nodes{0, 1, 2};
  auto series = centrality_distribution(nodes, sc);
  CHECK_FALSE(series.binned);
  CHECK(series.points == std::vector<SeriesPoint>{{1, 2}, {2, 1}});
  CHECK(series.total() == nodes.size());
}

TEST_CASE("continuous measures use log bins over the full score range") {
  std::vector<double> v{0.0, 1e-4, 3e-3, 1e-2, 1e-1, 1.0, 0.5};
  auto sc = scores(Measure::PageRank, v);
  std::vector<NodeIndex> nodes{0, 1, 2, 5, 6};
  BinningOptions opt{4};
  auto series = centrality_distribution(nodes, sc, opt);
  CHECK(series.binned);
  CHECK(series.zero_count == 1);
  CHECK(series.total() == 4);
  // Four bins over [1e-4, 1]: one decade each.
  REQUIRE(series.points.size() == 3);
  CHECK(series.points[0].value == doctest::Approx(std::sqrt(1e-4 * 1e-3)));
  CHECK(series.points[0].count == 1);
  CHECK(series.points[1].count == 1);
  CHECK(series.points[2].count == 2);
  for (std::size_t i = 1; i < series.points.size(); ++i) CHECK(series.points[i].value > series.points[i - 1].value);
}

TEST_CASE("binned conservation counts positive finite scores") {
  auto sc = scores(Measure::Betweenness, {0, 0, 3, 4, 100, 0});
  std::vector<NodeIndex> all{0, 1, 2, 3, 4, 5};
  auto series = centrality_distribution(all, sc);
  CHECK(series.total() == 3);
  CHECK(series.zero_count == 3);
}

TEST_CASE("split series carry their labels") {
  ErrorSplit split{{0}, {1, 2}};
  auto sc = scores(Measure::Degree, {3, 1, 1});
  CHECK(misclassified_distribution(split, sc).split == "incorrect");
  CHECK(misclassified_distribution(split, sc).total() == 2);
  CHECK(correct_distribution(split, sc).split == "correct");
}

TEST_CASE("emit and parse round-trip") {
  PowerLawSeries s;
  s.dataset = "toy";
  s.algorithm = "line1";
  s.measure = Measure::Closeness;
  s.seed = 42;
  s.binned = true;
  s.zero_count = 3;
  s.points = {{0.125, 4}, {0.3, 1}};
  std::ostringstream out;
  emit_series(s, out);
  CHECK(out.str().rfind("# dataset=toy algorithm=line1 measure=closeness seed=42\n", 0) == 0);
  std::istringstream in(out.str());
  auto back = parse_series(in);
  CHECK(back.points == s.points);
  CHECK(back.zero_count == 3);
  CHECK(back.binned);
  CHECK(back.measure == Measure::Closeness);
  CHECK(series_filename(s) == "toy.line1.closeness.incorrect.dist");
}

TEST_CASE("empty series is header only") {
  PowerLawSeries s;
  s.dataset = "toy";
  s.algorithm = "a";
  std::ostringstream out;
  emit_series(s, out);
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  CHECK(lines == 2);
}

TEST_CASE("normalized series sum to one and refuse to parse as counts") {
  PowerLawSeries s;
  s.points = {{1, 3}, {2, 1}};
  std::ostringstream out;
  emit_series(s, out, true);
  CHECK(out.str().find("\n1 0.75\n") != std::string::npos);
  std::istringstream in(out.str());
  CHECK_THROWS_AS(parse_series(in), ParseError);
}

TEST_CASE("low-region discrepancy share") {
  PowerLawSeries a, b;
  a.points = {{1, 10}, {2, 5}, {8, 1}};
  b.points = {{1, 4}, {2, 5}, {8, 3}};
  std::vector<PowerLawSeries> both{a, b};
  // |10-4| at value 1, |1-3| at value 8.
  CHECK(low_region_discrepancy_share(both, 2.0) == doctest::Approx(6.0 / 8.0));
  CHECK(low_region_discrepancy_share(both, 100.0) == doctest::Approx(1.0));
  std::vector<PowerLawSeries> same{a, a};
  CHECK(low_region_discrepancy_share(same, 2.0) == 0.0);
}

TEST_CASE("lower quartile by nearest rank") {
  CHECK(lower_quartile(scores(Measure::Degree, {5, 1, 4, 2, 3, 6, 7, 8})) == 2);
  CHECK(lower_quartile(scores(Measure::Degree, {9})) == 9);
}
