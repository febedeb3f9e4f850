#pragma once

// Sufficient statistics shared by parameter fitting and scoring.

#include <cstdint>
#include <span>
#include <vector>

#include "ebnet/dataset.hpp"

namespace ebnet::detail {

/// Parent configuration index of every row (first parent most significant).
inline std::vector<std::uint32_t> config_indices(const Dataset& data, std::span<const int> parents,
                                                 std::size_t& num_configs) {
  std::vector<std::uint32_t> idx(data.num_rows(), 0);
  num_configs = 1;
  for (int p : parents) {
    const auto card = static_cast<std::uint32_t>(data.cardinality(static_cast<std::size_t>(p)));
    const auto levels = data.levels(static_cast<std::size_t>(p));
    for (std::size_t r = 0; r < idx.size(); ++r)
      idx[r] = idx[r] * card + static_cast<std::uint32_t>(levels[r]);
    num_configs *= card;
  }
  return idx;
}

/// Joint counts n(config, level), laid out as config * cardinality + level.
inline std::vector<std::uint32_t> family_counts(const Dataset& data, int child, std::span<const int> parents,
                                                std::size_t& num_configs) {
  const auto idx = config_indices(data, parents, num_configs);
  const auto card = static_cast<std::size_t>(data.cardinality(static_cast<std::size_t>(child)));
  std::vector<std::uint32_t> counts(num_configs * card, 0);
  const auto levels = data.levels(static_cast<std::size_t>(child));
  for (std::size_t r = 0; r < idx.size(); ++r) ++counts[idx[r] * card + static_cast<std::size_t>(levels[r])];
  return counts;
}

/// Ordinary least squares of `child` on `parents` (with intercept).
struct OlsFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double rss = 0.0;
};

OlsFit ols(const Dataset& data, int child, std::span<const int> parents);

}  // namespace ebnet::detail
