#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ebnet/bayes_net.hpp"
#include "ebnet/dataset.hpp"

namespace testing {

inline ebnet::Dataset binary(std::vector<std::vector<int>> columns) {
  auto vars = ebnet::binary_variables(static_cast<int>(columns.size()));
  return ebnet::Dataset::discrete(std::move(vars), std::move(columns));
}

/// Column of `ones` ones followed by `zeros` zeros.
inline std::vector<int> counts(int ones, int zeros) {
  std::vector<int> out(static_cast<std::size_t>(ones), 1);
  out.resize(static_cast<std::size_t>(ones + zeros), 0);
  return out;
}

/// All assignments of `cards`, first variable most significant.
inline std::vector<std::vector<int>> assignments(const std::vector<int>& cards) {
  std::vector<std::vector<int>> out{{}};
  for (int r : cards) {
    std::vector<std::vector<int>> next;
    for (const auto& a : out)
      for (int l = 0; l < r; ++l) {
        auto b = a;
        b.push_back(l);
        next.push_back(b);
      }
    out = next;
  }
  return out;
}

/// log p(row) by direct product of CPT entries, parents read from the dag.
inline double joint_log_prob(const ebnet::BayesNet& net, const std::vector<int>& row) {
  double lp = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto& cpt = net.cpt(v);
    std::size_t config = 0;
    const auto& ps = net.dag().parents(static_cast<int>(v));
    for (std::size_t k = 0; k < ps.size(); ++k)
      config = config * static_cast<std::size_t>(cpt.parent_cardinalities[k]) + static_cast<std::size_t>(row[static_cast<std::size_t>(ps[k])]);
    lp += std::log(cpt.table[config * static_cast<std::size_t>(cpt.cardinality) + static_cast<std::size_t>(row[v])]);
  }
  return lp;
}

inline std::vector<int> row_of(const ebnet::Dataset& d, std::size_t r) {
  std::vector<int> out;
  for (std::size_t v = 0; v < d.num_variables(); ++v) out.push_back(d.levels(v)[r]);
  return out;
}

}  // namespace testing
