#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebnet/bayes_net.hpp"
#include "ebnet/dataset.hpp"
#include "ebnet/edge_test.hpp"
#include "ebnet/graph.hpp"
#include "ebnet/scoring.hpp"

namespace ebnet {

inline constexpr int kMaxEnumerableNodes = 5;

/// Every labelled DAG on n <= 5 nodes, each once.
std::vector<Dag> enumerate_dags(int n);

/// Number of labelled DAGs on n nodes by Robinson's recurrence (n <= 18).
std::uint64_t count_dags(int n);

/// Same skeleton and same v-structures.
bool markov_equivalent(const Dag& a, const Dag& b);

struct LandscapeReport {
  /// Scored structures (poset-legal ones only when a poset is given).
  std::vector<Dag> dags;
  std::vector<double> fitness;
  /// Indices into `dags` of structures with no neighbour better by more than
  /// kImprovementEpsilon under AddDelete moves.
  std::vector<std::size_t> optima;
  /// Per structure, the position in `optima` its steepest-ascent flow reaches.
  std::vector<std::size_t> basin;
  /// Per structure, index of its steepest-ascent successor; npos at optima.
  std::vector<std::size_t> successor;
  /// Per optimum, number of structures flowing to it.
  std::vector<std::size_t> basin_sizes;
  /// 1 + number of structures scoring above the truth (when given).
  std::optional<std::size_t> true_model_rank;
  bool unimodal = false;
  /// Unimodal and the single optimum is the truth.
  bool max_at_true = false;

  std::size_t dag_count() const { return dags.size(); }
};

/// Scores every DAG (n <= 5) and maps optima and basins.
LandscapeReport landscape(const Dataset& data, ScoreKind kind, const std::optional<Poset>& poset = std::nullopt,
                          const std::optional<Dag>& truth = std::nullopt);

/// Largest fitness spread inside any Markov equivalence class of the report.
double max_equivalence_gap(const LandscapeReport& report);

/// Joint probability table of a discrete net, mixed radix with variable 0 as
/// the most significant digit. State space must not exceed 2^20.
std::vector<double> exact_joint(const BayesNet& net);

/// KL(p || q) over two tables; +infinity when p > 0 where q == 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const BayesNet& p, const BayesNet& q);

/// Net on `dag` whose CPTs are the exact conditionals of `joint`. Parent
/// configurations of zero mass get a uniform row.
BayesNet project(const std::vector<VariableSpec>& variables, const Dag& dag, std::span<const double> joint);

struct SubmodTrial {
  Dag x;
  Dag y;
  Edge e;
  /// KL(f_{X+e} || f_X) and KL(f_{Y+e} || f_Y).
  double gain_x = 0.0;
  double gain_y = 0.0;
  /// Same comparison with score discrete derivatives.
  double delta_x = 0.0;
  double delta_y = 0.0;
  double lemma1_residual = 0.0;
};

struct SubmodReport {
  std::string mode;
  std::vector<SubmodTrial> trials;
  int violations = 0;
  double violation_fraction = 0.0;
  /// Over violating trials only; 0 when there are none.
  double median_violation = 0.0;
  double max_violation = 0.0;
  int score_violations = 0;
  double max_lemma1_residual = 0.0;
};

/// Tolerance under which gain_y - gain_x is treated as rounding.
inline constexpr double kSubmodTolerance = 1e-12;

/// Random chains X subset Y, e not in Y with Y + e acyclic. Families are
/// fitted on `data` by MLE (no smoothing unless a configuration is unseen);
/// the score derivatives use `kind`. Requires n <= 4 discrete data.
SubmodReport check_submodularity(const Dataset& data, ScoreKind kind, int trials, std::uint64_t seed);

/// Infinite-data surrogate: every family is the exact projection of the
/// joint of `truth`.
SubmodReport check_submodularity_exact(const BayesNet& truth, int trials, std::uint64_t seed);

/// |KL(p(x|yz) || q(x|y)) - sum p(xyz) log(p(xyz) / (p(y) q(x|y))) - H(z|y)|
/// for a joint table p over (x, y, z) laid out x-major and a conditional
/// q(x|y) laid out y-major (q[y * rx + x]). Entropies in nats.
double lemma1_residual(std::span<const double> p_xyz, int rx, int ry, int rz, std::span<const double> q_x_given_y);

enum class MetricMode { Directed, Skeleton };

struct EvalMetrics {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double ppv = 1.0;
  double tpr = 1.0;
};

EvalMetrics metrics(const Dag& truth, const Dag& inferred, MetricMode mode = MetricMode::Directed);

/// |E| / (n(n-1)/2).
double edge_density(const Dag& dag);

struct SynthInstance {
  BayesNet truth;
  Dataset data;
};

/// Random DAG of density delta, Dirichlet(1) binary CPTs, m samples, each
/// cell flipped independently with probability nu.
SynthInstance synth_instance(int n, double delta, std::size_t m, double nu, std::uint64_t seed);

/// Flips each binary cell with probability nu.
Dataset flip_noise(const Dataset& data, double nu, std::uint64_t seed);

struct SuiteConfig {
  int n = 10;
  double delta = 0.2;
  std::size_t m = 500;
  double nu = 0.0;
  int repeats = 10;
  /// hc-k<restarts>, eb-<confidence|agony|suppes>-<holm|bh|none>.
  std::vector<std::string> methods{"hc-k0", "hc-k200", "eb-confidence-holm", "eb-confidence-bh",
                                   "eb-agony-holm", "eb-agony-bh"};
  ScoreKind kind = ScoreKind::bic();
  int k_p = 100;
  int k_b = 100;
  double alpha = 0.05;
  MetricMode mode = MetricMode::Directed;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SuiteRow {
  int repeat = 0;
  std::string method;
  EvalMetrics metrics;
  double density = 0.0;
};

struct PosetComparison {
  int repeat = 0;
  std::size_t confidence_edges = 0;
  std::size_t agony_edges = 0;
  /// Confidence-poset edges absent from the agony poset.
  std::size_t missing = 0;
  WeightedDigraph consensus;
};

struct SuiteSummary {
  std::string method;
  double median_ppv = 0.0;
  double median_tpr = 0.0;
  double mean_ppv = 0.0;
  double mean_tpr = 0.0;
  double mean_density = 0.0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<SuiteRow> rows;
  /// Filled when both confidence and agony methods run.
  std::vector<PosetComparison> posets;
  std::vector<SuiteSummary> summary;
  double true_density = 0.0;
};

SuiteReport synth_suite(const SuiteConfig& cfg);

double median(std::vector<double> values);

}  // namespace ebnet
