#include "ebnet/poset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "ebnet/error.hpp"
#include "ebnet/parallel.hpp"
#include "ebnet/random.hpp"
#include "ebnet/stats.hpp"

namespace ebnet {

namespace {

constexpr std::uint64_t kConsensusStream = 0xc0;
constexpr std::uint64_t kSuppesStream = 0x5u;

bool has_path(int n, const std::vector<std::vector<int>>& out, int from, int to) {
  if (from == to) return true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : out[static_cast<std::size_t>(v)]) {
      if (w == to) return true;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed) {
  Rng rng(seed);
  const auto m = data.num_rows();
  std::vector<std::size_t> rows(m);
  for (auto& r : rows) r = static_cast<std::size_t>(rng.below(m));
  return data.select_rows(rows);
}

WeightedDigraph consensus(const Dataset& data, int k_p, const SearchConfig& cfg) {
  if (k_p < 1) throw InvalidArgument("k_p must be at least 1");
  const int n = static_cast<int>(data.num_variables());
  SearchConfig replicate_cfg = cfg;
  replicate_cfg.restarts = 0;
  replicate_cfg.poset.reset();
  replicate_cfg.threads = 1;
  validate(replicate_cfg, n);

  std::vector<std::optional<std::vector<Edge>>> fitted(static_cast<std::size_t>(k_p));
  std::vector<std::string> errors(static_cast<std::size_t>(k_p));
  parallel_for(static_cast<std::size_t>(k_p), cfg.threads, [&](std::size_t i) {
    try {
      const auto replicate = bootstrap_resample(data, Rng::derive(cfg.seed, kConsensusStream, i));
      fitted[i] = hill_climb(replicate, replicate_cfg).dag.edges();
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  WeightedDigraph g(n);
  bool any = false;
  for (const auto& edges : fitted) {
    if (!edges) continue;
    any = true;
    for (const auto& e : *edges) g.add(e.parent, e.child);
  }
  if (!any) throw Error("every consensus replicate failed: " + errors.back());
  return g;
}

Poset break_loops_confidence(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<std::pair<long, Edge>> order;
  for (const auto& [e, w] : g.weights()) order.emplace_back(w, e);
  std::sort(order.begin(), order.end());

  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (const auto& [e, w] : g.weights()) out[static_cast<std::size_t>(e.parent)].push_back(e.child);
  for (const auto& [w, e] : order) {
    // e lies on a cycle iff its head reaches its tail.
    if (has_path(n, out, e.child, e.parent)) {
      auto& adj = out[static_cast<std::size_t>(e.parent)];
      adj.erase(std::find(adj.begin(), adj.end(), e.child));
    }
  }
  std::vector<Edge> kept;
  for (int u = 0; u < n; ++u)
    for (int v : out[static_cast<std::size_t>(u)]) kept.push_back({u, v});
  return Poset(n, kept);
}

long agony_of(const WeightedDigraph& g, std::span<const int> rank) {
  long total = 0;
  for (const auto& [e, w] : g.weights()) {
    const int d = rank[static_cast<std::size_t>(e.parent)] - rank[static_cast<std::size_t>(e.child)];
    if (d >= 0) total += d + 1;
  }
  return total;
}

long agony_weight(const WeightedDigraph& g, std::span<const int> rank) {
  long total = 0;
  for (const auto& [e, w] : g.weights())
    if (rank[static_cast<std::size_t>(e.parent)] >= rank[static_cast<std::size_t>(e.child)]) total += w;
  return total;
}

namespace {

// Weighted agony sum_e c_e * max(r(u) - r(v) + 1, 0) is the LP dual of a
// maximum circulation with capacities c_e where every unit of flow earns 1.
// We cancel negative cycles in the residual graph: spare capacity on u->v is
// an arc u->v of length -1, flow on it an arc v->u of length +1. At optimum,
// shortest-path potentials d give an optimal ranking r = max(d) - d.
std::vector<int> min_agony_ranking(int n, const std::vector<Edge>& edges, const std::vector<long>& cost) {
  std::vector<long> flow(edges.size(), 0);
  const auto un = static_cast<std::size_t>(n);
  // Arc 2a runs along edge a, arc 2a + 1 against it.
  auto tail = [&](std::size_t arc) { return arc % 2 ? edges[arc / 2].child : edges[arc / 2].parent; };
  auto head = [&](std::size_t arc) { return arc % 2 ? edges[arc / 2].parent : edges[arc / 2].child; };
  auto residual = [&](std::size_t arc) { return arc % 2 ? flow[arc / 2] : cost[arc / 2] - flow[arc / 2]; };
  for (;;) {
    std::vector<long> dist(un, 0);
    std::vector<std::size_t> pred(un, 0);
    int relaxed = -1;
    for (int round = 0; round <= n; ++round) {
      relaxed = -1;
      for (std::size_t arc = 0; arc < 2 * edges.size(); ++arc) {
        if (residual(arc) <= 0) continue;
        const auto from = static_cast<std::size_t>(tail(arc));
        const auto to = static_cast<std::size_t>(head(arc));
        const long len = arc % 2 ? 1 : -1;
        if (dist[from] + len < dist[to]) {
          dist[to] = dist[from] + len;
          pred[to] = arc;
          relaxed = static_cast<int>(to);
        }
      }
      if (relaxed < 0) break;
    }
    if (relaxed < 0) {
      const long hi = *std::max_element(dist.begin(), dist.end());
      std::vector<int> rank(un);
      for (std::size_t v = 0; v < un; ++v) rank[v] = static_cast<int>(hi - dist[v]);
      return rank;
    }
    // Walk back n steps to land inside the cycle, then collect it.
    int v = relaxed;
    for (int i = 0; i < n; ++i) v = tail(pred[static_cast<std::size_t>(v)]);
    const int anchor = v;
    std::vector<std::size_t> cycle;
    long push = std::numeric_limits<long>::max();
    do {
      const auto arc = pred[static_cast<std::size_t>(v)];
      cycle.push_back(arc);
      push = std::min(push, residual(arc));
      v = tail(arc);
    } while (v != anchor);
    for (auto arc : cycle) flow[arc / 2] += arc % 2 ? -push : push;
  }
}

// Dense rank (1-based) of each edge weight. Tie-breaking on these instead of
// raw weights keeps the result invariant under a constant weight shift.
std::map<Edge, long> weight_ranks(const WeightedDigraph& g) {
  std::vector<long> values;
  for (const auto& [e, w] : g.weights()) values.push_back(w);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::map<Edge, long> out;
  for (const auto& [e, w] : g.weights())
    out[e] = 1 + (std::lower_bound(values.begin(), values.end(), w) - values.begin());
  return out;
}

// Lowers the inducing weight rank without changing the (optimal) agony by
// moving one node at a time to its best rank.
void weighted_tie_break(const WeightedDigraph& g, const std::map<Edge, long>& ranks, std::vector<int>& rank) {
  const int n = g.size();
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<std::pair<int, long>>> out(un), in(un);
  for (const auto& [e, w] : ranks) {
    out[static_cast<std::size_t>(e.parent)].emplace_back(e.child, w);
    in[static_cast<std::size_t>(e.child)].emplace_back(e.parent, w);
  }
  // Agony and inducing weight contributed by v's incident edges at rank t.
  auto local = [&](int v, int t) {
    long agony = 0;
    long weight = 0;
    for (const auto& [c, w] : out[static_cast<std::size_t>(v)]) {
      const int d = t - rank[static_cast<std::size_t>(c)];
      if (d >= 0) {
        agony += d + 1;
        weight += w;
      }
    }
    for (const auto& [p, w] : in[static_cast<std::size_t>(v)]) {
      const int d = rank[static_cast<std::size_t>(p)] - t;
      if (d >= 0) {
        agony += d + 1;
        weight += w;
      }
    }
    return std::pair{agony, weight};
  };
  for (int pass = 0; pass < 4 * n + 8; ++pass) {
    bool improved = false;
    for (int v = 0; v < n; ++v) {
      const int lo = *std::min_element(rank.begin(), rank.end()) - 1;
      const int hi = *std::max_element(rank.begin(), rank.end()) + 1;
      const auto [agony0, weight0] = local(v, rank[static_cast<std::size_t>(v)]);
      int best_rank = rank[static_cast<std::size_t>(v)];
      long best_weight = weight0;
      for (int t = lo; t <= hi; ++t) {
        const auto [agony, weight] = local(v, t);
        if (agony == agony0 && weight < best_weight) {
          best_weight = weight;
          best_rank = t;
        }
      }
      if (best_rank != rank[static_cast<std::size_t>(v)]) {
        rank[static_cast<std::size_t>(v)] = best_rank;
        improved = true;
      }
    }
    const int lo = *std::min_element(rank.begin(), rank.end());
    for (auto& r : rank) r -= lo;
    if (!improved) break;
  }
}

}  // namespace

AgonyRanking agony_rank(const WeightedDigraph& g) {
  AgonyRanking out;
  if (g.size() == 0) return out;
  // Lexicographic costs: unweighted agony first, then the order of the
  // bootstrap weights.
  const auto edges = g.edges();
  const auto ranks = weight_ranks(g);
  long rank_total = 0;
  for (const auto& [e, r] : ranks) rank_total += r;
  const long big = static_cast<long>(g.size()) * rank_total + 1;
  std::vector<long> cost;
  for (const auto& e : edges) cost.push_back(big + ranks.at(e));
  out.rank = min_agony_ranking(g.size(), edges, cost);
  weighted_tie_break(g, ranks, out.rank);
  out.agony = agony_of(g, out.rank);
  return out;
}

Poset break_loops_agony(const WeightedDigraph& g) {
  const auto ranking = agony_rank(g);
  std::vector<Edge> kept;
  for (const auto& e : g.edges())
    if (ranking.rank[static_cast<std::size_t>(e.parent)] < ranking.rank[static_cast<std::size_t>(e.child)])
      kept.push_back(e);
  return Poset(g.size(), kept);
}

Poset suppes_poset(const Dataset& data, int k_p, double alpha, std::uint64_t seed, SuppesTest test,
                   int threads) {
  if (k_p < 1) throw InvalidArgument("k_p must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!data.is_discrete()) throw InvalidArgument("suppes poset requires binary data");
  for (const auto& v : data.variables())
    if (v.cardinality() != 2) throw InvalidArgument("suppes poset requires binary data");

  const auto n = data.num_variables();
  const auto pairs = n * n;
  const auto reps = static_cast<std::size_t>(k_p);
  // Per replicate and ordered pair: temporal-priority and probability-raising
  // differences; NaN marks an undefined conditional.
  std::vector<std::vector<double>> priority(reps, std::vector<double>(pairs, 0.0));
  std::vector<std::vector<double>> raising(reps, std::vector<double>(pairs, 0.0));
  parallel_for(reps, threads, [&](std::size_t b) {
    const auto rep = bootstrap_resample(data, Rng::derive(seed, kSuppesStream, b));
    const double m = static_cast<double>(rep.num_rows());
    std::vector<double> marginal(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      long ones = 0;
      for (int v : rep.levels(i)) ones += v;
      marginal[i] = static_cast<double>(ones) / m;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = rep.levels(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto xj = rep.levels(j);
        long n1 = 0, n0 = 0, j_given_1 = 0, j_given_0 = 0;
        for (std::size_t r = 0; r < rep.num_rows(); ++r) {
          if (xi[r]) {
            ++n1;
            j_given_1 += xj[r];
          } else {
            ++n0;
            j_given_0 += xj[r];
          }
        }
        priority[b][i * n + j] = marginal[i] - marginal[j];
        raising[b][i * n + j] = (n1 == 0 || n0 == 0)
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : static_cast<double>(j_given_1) / static_cast<double>(n1) -
                                          static_cast<double>(j_given_0) / static_cast<double>(n0);
      }
    }
  });

  auto p_value = [&](const std::vector<std::vector<double>>& diffs, std::size_t pair, long& satisfied) {
    satisfied = 0;
    std::vector<double> column;
    column.reserve(reps);
    for (std::size_t b = 0; b < reps; ++b) {
      const double d = diffs[b][pair];
      if (d > 0.0) ++satisfied;
      column.push_back(std::isnan(d) ? 0.0 : d);
    }
    switch (test) {
      case SuppesTest::Percentile:
        return (1.0 + static_cast<double>(k_p - satisfied)) / (static_cast<double>(k_p) + 1.0);
      case SuppesTest::Binomial: return stats::binomial_upper_tail(satisfied, k_p, 0.5);
      case SuppesTest::Wilcoxon: return stats::wilcoxon_signed_rank_greater(column);
    }
    return 1.0;
  };

  WeightedDigraph admitted(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      long c1 = 0, c2 = 0;
      const double p1 = p_value(priority, i * n + j, c1);
      const double p2 = p_value(raising, i * n + j, c2);
      if (p1 <= alpha && p2 <= alpha)
        admitted.add(static_cast<int>(i), static_cast<int>(j), std::max(1L, std::min(c1, c2)));
    }
  }
  return break_loops_confidence(admitted);
}

}  // namespace ebnet
