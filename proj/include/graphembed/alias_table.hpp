#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphembed/random.hpp"

namespace graphembed {

/// Walker/Vose alias sampler: O(n) construction, O(1) draws.
class AliasTable {
public:
  AliasTable() = default;

  /// Throws ContractViolation on negative, non-finite or all-zero weights.
  explicit AliasTable(std::span<const double> weights);

  std::uint32_t sample(Rng& rng) const {
    const auto slot = static_cast<std::uint32_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[slot] ? slot : alias_[slot];
  }

  std::size_t size() const noexcept { return prob_.size(); }

  /// Exact probability of drawing `outcome` implied by the table.
  double probability(std::uint32_t outcome) const;

  /// Fills `prob` and `alias` (each weights.size() long) with a Vose alias layout, for
  /// callers that pack many small tables into flat arrays.
  static void build(std::span<const double> weights, std::span<double> prob,
                    std::span<std::uint32_t> alias);

private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

} // namespace graphembed
