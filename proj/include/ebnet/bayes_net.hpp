#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ebnet/dataset.hpp"
#include "ebnet/graph.hpp"

namespace ebnet {

/// Conditional probability table of a discrete node.
///
/// Rows are indexed by the joint parent configuration. Parents are taken in
/// ascending node order and the first parent is the most significant digit:
/// config = ((l_{p1} * r_{p2} + l_{p2}) * r_{p3} + l_{p3}) ...
struct Cpt {
  int cardinality = 2;
  std::vector<int> parent_cardinalities;
  /// num_configs() * cardinality entries, row-major.
  std::vector<double> table;

  std::size_t num_configs() const;
  std::span<const double> row(std::size_t config) const {
    return {table.data() + config * static_cast<std::size_t>(cardinality), static_cast<std::size_t>(cardinality)};
  }
  double prob(std::size_t config, int level) const {
    return table[config * static_cast<std::size_t>(cardinality) + static_cast<std::size_t>(level)];
  }

  bool operator==(const Cpt&) const = default;
};

/// Linear-Gaussian conditional: x = intercept + sum_k coef_k * parent_k + N(0, variance).
struct LinearGaussian {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double variance = 1.0;

  bool operator==(const LinearGaussian&) const = default;
};

using NodeParams = std::variant<Cpt, LinearGaussian>;

/// A DAG with one conditional family per node. Immutable after construction.
class BayesNet {
 public:
  BayesNet() = default;
  /// Validates that every CPT row is a probability vector (sum within 1e-9),
  /// row counts match the parent cardinalities and variances are positive.
  BayesNet(std::vector<VariableSpec> variables, Dag dag, std::vector<NodeParams> params);

  std::size_t size() const { return variables_.size(); }
  const Dag& dag() const { return dag_; }
  const std::vector<VariableSpec>& variables() const { return variables_; }
  const NodeParams& params(std::size_t node) const { return params_.at(node); }
  const Cpt& cpt(std::size_t node) const;
  const LinearGaussian& gaussian(std::size_t node) const;
  bool is_discrete() const;

  /// Parent configuration index of `node` under a full joint assignment.
  std::size_t config_index(std::size_t node, std::span<const int> assignment) const;

  bool operator==(const BayesNet&) const = default;

 private:
  std::vector<VariableSpec> variables_;
  Dag dag_;
  std::vector<NodeParams> params_;
};

/// Default Laplace pseudo-count for discrete fits.
inline constexpr double kDefaultSmoothing = 1.0;

/// Maximum-likelihood parameters for `dag` on `data`. Discrete cells get
/// (count + smoothing) / (parent_count + cardinality * smoothing); continuous
/// nodes are fitted by ordinary least squares with variance RSS / m.
/// Throws InvalidArgument for an unobserved parent configuration when
/// smoothing == 0, or a singular Gaussian design.
BayesNet mle_fit(const Dag& dag, const Dataset& data, double smoothing = kDefaultSmoothing);

/// Sum over rows and nodes of log p(x_i | parents). Returns -infinity when an
/// observed cell has probability zero.
double log_likelihood(const BayesNet& net, const Dataset& data);

/// Ancestral sampling of `m` rows; deterministic for a fixed seed.
Dataset sample(const BayesNet& net, std::size_t m, std::uint64_t seed);

/// Random discrete network on `dag`: every CPT row drawn from a symmetric
/// Dirichlet(alpha) over `cardinality` levels.
BayesNet random_discrete_net(const Dag& dag, std::uint64_t seed, int cardinality = 2, double alpha = 1.0);

/// Random linear-Gaussian network on `dag`: coefficients uniform in
/// +-[0.5, 1.5], intercepts N(0,1), unit residual variance.
BayesNet random_gaussian_net(const Dag& dag, std::uint64_t seed);

}  // namespace ebnet
