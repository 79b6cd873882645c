#pragma once

// Pearson chi-squared goodness of fit.

#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

namespace oracle {

/// Upper-tail p-value of the chi-squared statistic of `observed` counts against
/// `expected_prob` (which must sum to 1). Outcomes with zero probability must not occur.
inline double chi_squared_p(const std::vector<double>& observed, const std::vector<double>& expected_prob) {
  double total = 0.0;
  for (double o : observed) total += o;
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected_prob[i] <= 0.0) {
      if (observed[i] > 0) return 0.0;
      continue;
    }
    const double e = expected_prob[i] * total;
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace oracle
