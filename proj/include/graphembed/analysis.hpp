#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "graphembed/centrality.hpp"
#include "graphembed/classify.hpp"

namespace graphembed {

struct ErrorSplit {
  std::vector<NodeIndex> correct;
  std::vector<NodeIndex> incorrect;
};

/// Partitions nodes by their out-of-fold correctness flag.
ErrorSplit split_by_correctness(const EvalReport& report);

struct SeriesPoint {
  double value = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// Frequency of centrality values over a node set, ascending by value.
struct PowerLawSeries {
  std::string dataset;
  std::string algorithm;
  Measure measure = Measure::Degree;
  std::uint64_t seed = 0;
  /// "incorrect" or "correct".
  std::string split = "incorrect";
  /// Continuous measures are counted over log-spaced bins; value is the bin's geometric center.
  bool binned = false;
  /// Nodes whose centrality is exactly zero (kept apart from log bins).
  std::uint64_t zero_count = 0;
  std::vector<SeriesPoint> points;

  std::uint64_t total() const;
};

struct BinningOptions {
  std::size_t bins = 32;
};

/// Counts `nodes` by exact value for degree-family measures, or over `bins` log-spaced
/// bins spanning the smallest positive to the largest value in `scores` otherwise.
/// Zero-count values and bins are omitted.
PowerLawSeries centrality_distribution(std::span<const NodeIndex> nodes, const CentralityScores& scores,
                                       const BinningOptions& options = {});

PowerLawSeries misclassified_distribution(const ErrorSplit& split, const CentralityScores& scores,
                                          const BinningOptions& options = {});
PowerLawSeries correct_distribution(const ErrorSplit& split, const CentralityScores& scores,
                                    const BinningOptions& options = {});

/// `# dataset=... algorithm=... measure=... seed=...`, a second `#` line with split,
/// binning and zero count, then `<value> <count>` rows. With `normalized` the counts are
/// written as fractions of the series total.
void emit_series(const PowerLawSeries& series, std::ostream& out, bool normalized = false);
PowerLawSeries parse_series(std::istream& in);

/// `<dataset>.<algorithm>.<measure>.<split>.dist`
std::string series_filename(const PowerLawSeries& series);

/// Share of the summed pairwise absolute count differences between series that falls at
/// values <= `threshold`. All series must share one measure. Returns 0 when the series agree.
double low_region_discrepancy_share(std::span<const PowerLawSeries> series, double threshold);

/// 25th percentile (nearest rank) of the scores.
double lower_quartile(const CentralityScores& scores);

} // namespace graphembed
