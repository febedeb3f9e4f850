#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ebnet/dataset.hpp"
#include "ebnet/graph.hpp"
#include "ebnet/scoring.hpp"

namespace ebnet {

enum class MoveSet { AddDelete, AddDeleteReverse };

struct SearchConfig {
  ScoreKind kind = ScoreKind::bic();
  /// Number of random initial DAGs in addition to the empty graph.
  int restarts = 0;
  /// Permitted edges; nullopt searches every non-reflexive pair.
  std::optional<Poset> poset;
  std::optional<int> max_parents;
  std::uint64_t seed = 0;
  MoveSet moves = MoveSet::AddDelete;
  /// Edge probability of the random restart DAGs.
  double restart_density = 0.5;
  /// Workers for independent restarts; 0 means all cores.
  int threads = 1;
};

/// Throws InvalidArgument on negative restarts, max_parents < 1 or a poset of
/// the wrong size.
void validate(const SearchConfig& cfg, int n);

enum class MoveType { Add, Delete, Reverse };

/// One-edge move. For Reverse, `edge` is the edge being reversed.
struct Move {
  MoveType type = MoveType::Add;
  Edge edge;

  bool operator==(const Move&) const = default;
};

Dag apply(const Dag& dag, const Move& move);

/// Every legal one-edge move from `dag`, in search order: children ascending,
/// then parents ascending; per pair a deletion (then reversal) of a present
/// edge or an insertion of an absent one.
std::vector<Move> legal_moves(const Dag& dag, const std::optional<Poset>& poset, MoveSet moves,
                              std::optional<int> max_parents = std::nullopt);

/// All acyclic, poset-legal graphs one move away from `dag`.
std::vector<Dag> neighborhood(const Dag& dag, const std::optional<Poset>& poset, MoveSet moves,
                              std::optional<int> max_parents = std::nullopt);

struct TraceStep {
  Move move;
  /// Fitness after the move.
  double fitness = 0.0;
};

struct ClimbTrace {
  Dag start;
  double start_fitness = 0.0;
  std::vector<TraceStep> steps;
  Dag terminal;
  double terminal_fitness = 0.0;
};

struct SearchResult {
  Dag dag;
  FitnessValue fitness;
  /// One trace per start; start 0 is the empty graph.
  std::vector<ClimbTrace> climbs;
  std::size_t best_start = 0;
};

/// Minimum score gain for a move to be taken.
inline constexpr double kImprovementEpsilon = 1e-9;

/// Steepest-ascent climb from `start` until no neighbour improves the score by
/// more than kImprovementEpsilon. Ties go to the first move in legal_moves order.
ClimbTrace climb(const Dag& start, const FamilyScorer& scorer, const SearchConfig& cfg);

/// Best terminal model over the empty start plus cfg.restarts random starts.
SearchResult hill_climb(const Dataset& data, const SearchConfig& cfg);
SearchResult hill_climb(const FamilyScorer& scorer, const SearchConfig& cfg);

/// Uniform random node ordering, then every ordering-consistent (and
/// poset-legal) pair kept independently with probability `density`.
Dag random_dag(int n, const std::optional<Poset>& poset, double density, std::uint64_t seed,
               std::optional<int> max_parents = std::nullopt);

}  // namespace ebnet
