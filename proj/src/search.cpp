#include "ebnet/search.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ebnet/error.hpp"
#include "ebnet/parallel.hpp"
#include "ebnet/random.hpp"

namespace ebnet {

namespace {

/// reach[u][v] == 1 iff a directed path u ~> v of length >= 1 exists.
class Reachability {
 public:
  explicit Reachability(const Dag& dag) : n_(dag.size()), bits_(static_cast<std::size_t>(n_ * n_), 0) {
    const auto order = dag.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int u = *it;
      for (int c : dag.children(u)) {
        set(u, c);
        for (int w = 0; w < n_; ++w)
          if (get(c, w)) set(u, w);
      }
    }
  }

  bool get(int u, int v) const { return bits_[static_cast<std::size_t>(u * n_ + v)] != 0; }

 private:
  void set(int u, int v) { bits_[static_cast<std::size_t>(u * n_ + v)] = 1; }

  int n_;
  std::vector<std::uint8_t> bits_;
};

std::vector<int> with_parent(const std::vector<int>& parents, int p) {
  std::vector<int> out(parents);
  out.insert(std::lower_bound(out.begin(), out.end(), p), p);
  return out;
}

std::vector<int> without_parent(const std::vector<int>& parents, int p) {
  std::vector<int> out;
  out.reserve(parents.size());
  for (int q : parents)
    if (q != p) out.push_back(q);
  return out;
}

bool reversal_keeps_acyclic(const Dag& dag, const Reachability& reach, int p, int c) {
  // Reversing p->c is legal iff no other path p ~> c exists.
  for (int w : dag.children(p))
    if (w != c && reach.get(w, c)) return false;
  return true;
}

bool parent_room(const Dag& dag, int child, std::optional<int> max_parents) {
  return !max_parents || static_cast<int>(dag.parents(child).size()) < *max_parents;
}

}  // namespace

void validate(const SearchConfig& cfg, int n) {
  if (cfg.restarts < 0) throw InvalidArgument("restarts must be non-negative");
  if (cfg.max_parents && *cfg.max_parents < 1) throw InvalidArgument("max_parents must be at least 1");
  if (cfg.poset && cfg.poset->size() != n) throw InvalidArgument("poset size does not match dataset");
  if (!(cfg.restart_density >= 0.0 && cfg.restart_density <= 1.0))
    throw InvalidArgument("restart density must lie in [0, 1]");
}

Dag apply(const Dag& dag, const Move& move) {
  Dag out = dag;
  switch (move.type) {
    case MoveType::Add: out.add_edge(move.edge); break;
    case MoveType::Delete: out.remove_edge(move.edge); break;
    case MoveType::Reverse:
      out.remove_edge(move.edge);
      out.add_edge(move.edge.child, move.edge.parent);
      break;
  }
  return out;
}

std::vector<Move> legal_moves(const Dag& dag, const std::optional<Poset>& poset, MoveSet moves,
                              std::optional<int> max_parents) {
  const int n = dag.size();
  const Reachability reach(dag);
  std::vector<Move> out;
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < n; ++p) {
      if (p == c) continue;
      if (dag.has_edge(p, c)) {
        out.push_back({MoveType::Delete, {p, c}});
        if (moves == MoveSet::AddDeleteReverse && (!poset || poset->allows(c, p)) &&
            parent_room(dag, p, max_parents) && reversal_keeps_acyclic(dag, reach, p, c))
          out.push_back({MoveType::Reverse, {p, c}});
      } else if ((!poset || poset->allows(p, c)) && parent_room(dag, c, max_parents) && !reach.get(c, p)) {
        out.push_back({MoveType::Add, {p, c}});
      }
    }
  }
  return out;
}

std::vector<Dag> neighborhood(const Dag& dag, const std::optional<Poset>& poset, MoveSet moves,
                              std::optional<int> max_parents) {
  std::vector<Dag> out;
  for (const auto& mv : legal_moves(dag, poset, moves, max_parents)) out.push_back(apply(dag, mv));
  return out;
}

ClimbTrace climb(const Dag& start, const FamilyScorer& scorer, const SearchConfig& cfg) {
  const int n = start.size();
  if (n != scorer.num_variables()) throw InvalidArgument("start dag size does not match dataset");
  if (cfg.poset && !cfg.poset->contains(start)) throw InvalidArgument("start dag is not poset-legal");

  ClimbTrace trace;
  trace.start = start;
  Dag dag = start;
  std::vector<double> node(static_cast<std::size_t>(n));
  auto total = [&] {
    long double t = 0.0L;
    for (double s : node) t += s;
    return static_cast<double>(t);
  };
  for (int v = 0; v < n; ++v) node[static_cast<std::size_t>(v)] = scorer.family(v, dag.parents(v));
  trace.start_fitness = total();

  for (;;) {
    const Reachability reach(dag);
    double best = kImprovementEpsilon;
    std::optional<Move> chosen;
    double chosen_child_score = 0.0;
    double chosen_parent_score = 0.0;

    for (int c = 0; c < n; ++c) {
      const auto& parents = dag.parents(c);
      const double base = node[static_cast<std::size_t>(c)];
      for (int p = 0; p < n; ++p) {
        if (p == c) continue;
        if (dag.has_edge(p, c)) {
          const double dropped = scorer.family(c, without_parent(parents, p));
          if (dropped - base > best) {
            best = dropped - base;
            chosen = Move{MoveType::Delete, {p, c}};
            chosen_child_score = dropped;
          }
          if (cfg.moves == MoveSet::AddDeleteReverse && (!cfg.poset || cfg.poset->allows(c, p)) &&
              parent_room(dag, p, cfg.max_parents) && reversal_keeps_acyclic(dag, reach, p, c)) {
            const double gained = scorer.family(p, with_parent(dag.parents(p), c));
            const double delta = (dropped - base) + (gained - node[static_cast<std::size_t>(p)]);
            if (delta > best) {
              best = delta;
              chosen = Move{MoveType::Reverse, {p, c}};
              chosen_child_score = dropped;
              chosen_parent_score = gained;
            }
          }
        } else if ((!cfg.poset || cfg.poset->allows(p, c)) && parent_room(dag, c, cfg.max_parents) &&
                   !reach.get(c, p)) {
          const double added = scorer.family(c, with_parent(parents, p));
          if (added - base > best) {
            best = added - base;
            chosen = Move{MoveType::Add, {p, c}};
            chosen_child_score = added;
          }
        }
      }
    }
    if (!chosen) break;
    dag = apply(dag, *chosen);
    node[static_cast<std::size_t>(chosen->edge.child)] = chosen_child_score;
    if (chosen->type == MoveType::Reverse) node[static_cast<std::size_t>(chosen->edge.parent)] = chosen_parent_score;
    trace.steps.push_back({*chosen, total()});
  }
  trace.terminal = dag;
  trace.terminal_fitness = trace.steps.empty() ? trace.start_fitness : trace.steps.back().fitness;
  return trace;
}

SearchResult hill_climb(const FamilyScorer& scorer, const SearchConfig& cfg) {
  const int n = scorer.num_variables();
  validate(cfg, n);
  const auto n_starts = static_cast<std::size_t>(cfg.restarts) + 1;
  std::vector<ClimbTrace> climbs(n_starts);
  parallel_for(n_starts, cfg.threads, [&](std::size_t i) {
    const Dag start = i == 0 ? Dag(n)
                             : random_dag(n, cfg.poset, cfg.restart_density, Rng::derive(cfg.seed, 0x5eed, i),
                                          cfg.max_parents);
    climbs[i] = climb(start, scorer, cfg);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < n_starts; ++i)
    if (climbs[i].terminal_fitness > climbs[best].terminal_fitness) best = i;
  SearchResult result;
  result.dag = climbs[best].terminal;
  result.fitness = score(result.dag, scorer);
  result.best_start = best;
  result.climbs = std::move(climbs);
  return result;
}

SearchResult hill_climb(const Dataset& data, const SearchConfig& cfg) {
  const FamilyScorer scorer(data, cfg.kind);
  return hill_climb(scorer, cfg);
}

Dag random_dag(int n, const std::optional<Poset>& poset, double density, std::uint64_t seed,
               std::optional<int> max_parents) {
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in [0, 1]");
  if (poset && poset->size() != n) throw InvalidArgument("poset size does not match node count");
  Rng rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  Dag dag(n);
  for (std::size_t j = 1; j < order.size(); ++j) {
    const int child = order[j];
    for (std::size_t i = 0; i < j; ++i) {
      const int parent = order[i];
      if (poset && !poset->allows(parent, child)) continue;
      if (!parent_room(dag, child, max_parents)) continue;
      if (rng.bernoulli(density)) dag.add_edge(parent, child);
    }
  }
  return dag;
}

}  // namespace ebnet
