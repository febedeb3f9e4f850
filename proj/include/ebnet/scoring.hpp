#pragma once

#include <cstddef>
#include <list>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ebnet/dataset.hpp"
#include "ebnet/graph.hpp"

namespace ebnet {

enum class ScoreType { LL, BIC, AIC, BDE, K2 };

/// Regularized score selector. Larger scores are better for every kind.
struct ScoreKind {
  ScoreType type = ScoreType::BIC;
  /// Equivalent sample size of the BDeu prior; used only by BDE.
  double ess = 1.0;

  static ScoreKind ll() { return {ScoreType::LL}; }
  static ScoreKind bic() { return {ScoreType::BIC}; }
  static ScoreKind aic() { return {ScoreType::AIC}; }
  static ScoreKind bde(double ess = 1.0) { return {ScoreType::BDE, ess}; }
  static ScoreKind k2() { return {ScoreType::K2}; }

  /// Accepts "ll", "bic", "aic", "bde", "bde:<ess>", "k2" (case-insensitive).
  static ScoreKind parse(const std::string& text);
  std::string name() const;

  bool operator==(const ScoreKind&) const = default;
};

/// Decomposed fitness of a structure: one family score per node.
struct FitnessValue {
  double total = 0.0;
  std::vector<double> per_node;
};

/// Family scores for one dataset and score kind, memoised by
/// (child, sorted parent set) in a thread-safe LRU cache.
///
/// Holds a reference to `data`; the dataset must outlive the scorer.
class FamilyScorer {
 public:
  static constexpr std::size_t kDefaultCacheCapacity = std::size_t{1} << 20;

  /// Throws InvalidArgument for BDE/K2 on continuous data or a non-positive ess.
  FamilyScorer(const Dataset& data, ScoreKind kind, std::size_t cache_capacity = kDefaultCacheCapacity);

  FamilyScorer(const FamilyScorer&) = delete;
  FamilyScorer& operator=(const FamilyScorer&) = delete;

  const Dataset& data() const { return data_; }
  ScoreKind kind() const { return kind_; }
  int num_variables() const { return static_cast<int>(data_.num_variables()); }

  /// Score of `child` with the given ascending parent list.
  double family(int child, std::span<const int> parents) const;

  /// Maximised log-likelihood term of the family.
  double family_log_likelihood(int child, std::span<const int> parents) const;

  /// Free parameters: (r-1) * prod(parent cards) for discrete nodes,
  /// |parents| + 2 for linear-Gaussian nodes.
  std::size_t free_parameters(int child, std::span<const int> parents) const;

  std::size_t cache_size() const;
  std::size_t cache_hits() const;

 private:
  struct Key {
    int child;
    std::vector<int> parents;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  using LruList = std::list<std::pair<Key, double>>;

  double compute(int child, std::span<const int> parents) const;

  const Dataset& data_;
  ScoreKind kind_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable LruList lru_;
  mutable std::unordered_map<Key, LruList::iterator, KeyHash> index_;
  mutable std::size_t hits_ = 0;
};

/// Total and per-node score of `dag`.
FitnessValue score(const Dag& dag, const Dataset& data, ScoreKind kind);
FitnessValue score(const Dag& dag, const FamilyScorer& scorer);

/// score(X + e) - score(X), computed by rescoring only e's child family.
/// Throws InvalidArgument if e is already in X or would create a cycle.
double discrete_derivative(Edge e, const Dag& x, const Dataset& data, ScoreKind kind);
double discrete_derivative(Edge e, const Dag& x, const FamilyScorer& scorer);

}  // namespace ebnet
