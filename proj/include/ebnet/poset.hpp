#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ebnet/dataset.hpp"
#include "ebnet/graph.hpp"
#include "ebnet/search.hpp"

namespace ebnet {

/// m rows drawn uniformly with replacement; rows are kept intact.
Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed);

/// Weighted union of the structures fitted on `k_p` bootstrap replicates;
/// weight = number of replicates containing the edge. Each replicate is fitted
/// from the empty graph over all pairs (cfg.restarts and cfg.poset are
/// ignored). Replicate seeds derive from cfg.seed. A replicate whose fit throws
/// contributes nothing; if every replicate fails the last error is rethrown.
WeightedDigraph consensus(const Dataset& data, int k_p, const SearchConfig& cfg);

/// Scans edges by ascending weight (ties by (parent, child)) and removes each
/// edge that currently lies on a directed cycle.
Poset break_loops_confidence(const WeightedDigraph& g);

struct AgonyRanking {
  std::vector<int> rank;
  long agony = 0;
};

/// Agony of a ranking: sum over edges (u, v) with rank(u) >= rank(v) of
/// rank(u) - rank(v) + 1. Edge weights are ignored.
long agony_of(const WeightedDigraph& g, std::span<const int> rank);

/// Total weight of the edges that induce agony under `rank`.
long agony_weight(const WeightedDigraph& g, std::span<const int> rank);

/// Minimum-agony ranking. Among minimum rankings, heavier edges are preferred
/// as non-inducing: ties are broken on the rank order of the weights, so only
/// the order of the weights matters.
AgonyRanking agony_rank(const WeightedDigraph& g);

/// Drops every edge (u, v) with rank(u) >= rank(v) under agony_rank(g).
Poset break_loops_agony(const WeightedDigraph& g);

enum class SuppesTest {
  /// Bootstrap percentile test: p = (1 + #replicates violating) / (k_p + 1).
  Percentile,
  /// Exact binomial test of the satisfying fraction against 1/2.
  Binomial,
  /// One-sided Wilcoxon signed-rank test on the replicate differences.
  Wilcoxon,
};

/// Edges x_i -> x_j admitted when both p(x_i) > p(x_j) and
/// p(x_j | x_i) > p(x_j | not x_i) are significant at `alpha` over `k_p`
/// bootstrap replicates. Remaining cycles are broken by the confidence
/// heuristic with weight = min of the two satisfying counts.
/// Throws InvalidArgument on non-binary data.
Poset suppes_poset(const Dataset& data, int k_p, double alpha, std::uint64_t seed,
                   SuppesTest test = SuppesTest::Percentile, int threads = 1);

}  // namespace ebnet
