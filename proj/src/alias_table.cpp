#include "graphembed/alias_table.hpp"

#include <cmath>

#include "graphembed/error.hpp"

namespace graphembed {

void AliasTable::build(std::span<const double> weights, std::span<double> prob,
                       std::span<std::uint32_t> alias) {
  const auto n = weights.size();
  if (n == 0) throw ContractViolation("alias table: no outcomes");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ContractViolation("alias table: weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw ContractViolation("alias table: all weights are zero");

  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob[s] = scaled[s];
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto l : large) {
    prob[l] = 1.0;
    alias[l] = l;
  }
  for (auto s : small) {
    prob[s] = 1.0;
    alias[s] = s;
  }
}

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  build(weights, prob_, alias_);
}

double AliasTable::probability(std::uint32_t outcome) const {
  const double n = static_cast<double>(prob_.size());
  double p = prob_.at(outcome) / n;
  for (std::size_t slot = 0; slot < prob_.size(); ++slot)
    if (alias_[slot] == outcome && slot != outcome) p += (1.0 - prob_[slot]) / n;
  return p;
}

} // namespace graphembed
