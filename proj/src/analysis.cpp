#include "graphembed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "graphembed/error.hpp"
#include "text_util.hpp"

namespace graphembed {

ErrorSplit split_by_correctness(const EvalReport& report) {
  ErrorSplit split;
  for (NodeIndex u = 0; u < report.outcomes.size(); ++u) {
    const auto& o = report.outcomes[u];
    if (o.fold < 0) throw ContractViolation("report lacks a prediction for node index " + std::to_string(u));
    (o.correct() ? split.correct : split.incorrect).push_back(u);
  }
  return split;
}

std::uint64_t PowerLawSeries::total() const {
  std::uint64_t t = 0;
  for (const auto& p : points) t += p.count;
  return t;
}

PowerLawSeries centrality_distribution(std::span<const NodeIndex> nodes, const CentralityScores& scores,
                                       const BinningOptions& options) {
  PowerLawSeries series;
  series.measure = scores.measure;
  for (auto u : nodes)
    if (u >= scores.values.size()) throw ContractViolation("scores do not cover the node set");

  if (is_integer_valued(scores.measure)) {
    std::map<double, std::uint64_t> counts;
    for (auto u : nodes) ++counts[scores.values[u]];
    for (auto [v, c] : counts) series.points.push_back({v, c});
    return series;
  }

  series.binned = true;
  if (options.bins == 0) throw ContractViolation("binning needs at least one bin");
  double lo = 0.0, hi = 0.0;
  for (double v : scores.values) {
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    lo = lo == 0.0 ? v : std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto bins = options.bins;
  std::vector<std::uint64_t> counts(bins, 0);
  const double span = lo > 0.0 ? std::log(hi / lo) : 0.0;
  for (auto u : nodes) {
    const double v = scores.values[u];
    if (v == 0.0) {
      ++series.zero_count;
      continue;
    }
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    std::size_t b = 0;
    if (span > 0.0) {
      const double pos = std::log(v / lo) / span * static_cast<double>(bins);
      b = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, pos)));
    }
    ++counts[b];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double width = span / static_cast<double>(bins);
    const double center = lo * std::exp(width * (static_cast<double>(b) + 0.5));
    series.points.push_back({span > 0.0 ? center : lo, counts[b]});
  }
  return series;
}

PowerLawSeries misclassified_distribution(const ErrorSplit& split, const CentralityScores& scores,
                                          const BinningOptions& options) {
  auto s = centrality_distribution(split.incorrect, scores, options);
  s.split = "incorrect";
  return s;
}

PowerLawSeries correct_distribution(const ErrorSplit& split, const CentralityScores& scores,
                                    const BinningOptions& options) {
  auto s = centrality_distribution(split.correct, scores, options);
  s.split = "correct";
  return s;
}

void emit_series(const PowerLawSeries& series, std::ostream& out, bool normalized) {
  out << "# dataset=" << series.dataset << " algorithm=" << series.algorithm
      << " measure=" << measure_name(series.measure) << " seed=" << series.seed << '\n';
  out << "# split=" << series.split << " binned=" << (series.binned ? 1 : 0)
      << " zero_count=" << series.zero_count << " normalized=" << (normalized ? 1 : 0) << '\n';
  const double total = static_cast<double>(series.total());
  for (const auto& p : series.points) {
    out << detail::format_double(p.value) << ' ';
    if (normalized) out << detail::format_double(static_cast<double>(p.count) / total);
    else out << p.count;
    out << '\n';
  }
  if (!out) throw Error("failed to write distribution series");
}

namespace {

std::map<std::string, std::string> header_fields(std::string_view line) {
  std::map<std::string, std::string> out;
  for (auto field : detail::split_fields(line.substr(1))) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace(std::string(field.substr(0, eq)), std::string(field.substr(eq + 1)));
  }
  return out;
}

} // namespace

PowerLawSeries parse_series(std::istream& in) {
  PowerLawSeries s;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto f = header_fields(line);
      if (f.count("dataset")) {
        have_header = true;
        s.dataset = f["dataset"];
        s.algorithm = f["algorithm"];
        auto m = parse_measure(f["measure"]);
        if (!m) throw ParseError(line_no, "unknown measure '" + f["measure"] + "'");
        s.measure = *m;
        s.seed = std::stoull(f["seed"]);
      }
      if (f.count("split")) {
        s.split = f["split"];
        s.binned = f["binned"] == "1";
        s.zero_count = std::stoull(f["zero_count"]);
        if (f["normalized"] == "1") throw ParseError(line_no, "normalized series cannot be read back as counts");
      }
      continue;
    }
    auto fields = detail::split_fields(line);
    if (fields.size() != 2) throw ParseError(line_no, "expected '<value> <count>'");
    auto v = detail::parse_double(fields[0]);
    auto c = detail::parse_int(fields[1]);
    if (!v || !c || *c < 0) throw ParseError(line_no, "malformed series row");
    s.points.push_back({*v, static_cast<std::uint64_t>(*c)});
  }
  if (!have_header) throw ParseError(0, "series lacks its '# dataset=' header");
  return s;
}

std::string series_filename(const PowerLawSeries& series) {
  return series.dataset + "." + series.algorithm + "." + std::string(measure_name(series.measure)) +
         "." + series.split + ".dist";
}

double low_region_discrepancy_share(std::span<const PowerLawSeries> series, double threshold) {
  double low = 0.0, all = 0.0;
  for (std::size_t a = 0; a < series.size(); ++a)
    for (std::size_t b = a + 1; b < series.size(); ++b) {
      if (series[a].measure != series[b].measure)
        throw ContractViolation("discrepancy share needs series of one measure");
      std::map<double, std::pair<double, double>> merged;
      for (const auto& p : series[a].points) merged[p.value].first += static_cast<double>(p.count);
      for (const auto& p : series[b].points) merged[p.value].second += static_cast<double>(p.count);
      for (const auto& [value, counts] : merged) {
        const double diff = std::abs(counts.first - counts.second);
        all += diff;
        if (value <= threshold) low += diff;
      }
    }
  return all > 0.0 ? low / all : 0.0;
}

double lower_quartile(const CentralityScores& scores) {
  if (scores.values.empty()) throw ContractViolation("lower_quartile: no scores");
  std::vector<double> v = scores.values;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

} // namespace graphembed
