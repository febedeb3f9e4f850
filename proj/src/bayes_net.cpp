#include "ebnet/bayes_net.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "counting.hpp"
#include "ebnet/error.hpp"
#include "ebnet/random.hpp"

namespace ebnet {

namespace detail {

OlsFit ols(const Dataset& data, int child, std::span<const int> parents) {
  const auto m = static_cast<Eigen::Index>(data.num_rows());
  const auto k = static_cast<Eigen::Index>(parents.size());
  Eigen::MatrixXd design(m, k + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto col = data.values(static_cast<std::size_t>(parents[static_cast<std::size_t>(j)]));
    design.col(j + 1) = Eigen::Map<const Eigen::VectorXd>(col.data(), m);
  }
  const auto y_span = data.values(static_cast<std::size_t>(child));
  const Eigen::Map<const Eigen::VectorXd> y(y_span.data(), m);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k + 1) throw InvalidArgument("singular design matrix for node " + std::to_string(child));
  const Eigen::VectorXd beta = qr.solve(y);
  OlsFit fit;
  fit.intercept = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  fit.rss = (y - design * beta).squaredNorm();
  return fit;
}

}  // namespace detail

namespace {

// Residual variance floor relative to the marginal variance; keeps the
// Gaussian log-density finite for (near-)deterministic children.
constexpr double kVarianceFloor = 1e-12;

double marginal_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

}  // namespace

std::size_t Cpt::num_configs() const {
  std::size_t q = 1;
  for (int c : parent_cardinalities) q *= static_cast<std::size_t>(c);
  return q;
}

BayesNet::BayesNet(std::vector<VariableSpec> variables, Dag dag, std::vector<NodeParams> params)
    : variables_(std::move(variables)), dag_(std::move(dag)), params_(std::move(params)) {
  const auto n = variables_.size();
  if (static_cast<std::size_t>(dag_.size()) != n) throw InvalidArgument("dag size does not match variables");
  if (params_.size() != n) throw InvalidArgument("parameter count does not match variables");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& var = variables_[i];
    const auto& parents = dag_.parents(static_cast<int>(i));
    if (var.is_discrete()) {
      const auto* cpt = std::get_if<Cpt>(&params_[i]);
      if (!cpt) throw InvalidArgument("node '" + var.name + "' is discrete but has Gaussian parameters");
      if (cpt->cardinality != var.cardinality())
        throw InvalidArgument("node '" + var.name + "': CPT cardinality mismatch");
      if (cpt->parent_cardinalities.size() != parents.size())
        throw InvalidArgument("node '" + var.name + "': CPT parent count mismatch");
      for (std::size_t k = 0; k < parents.size(); ++k) {
        const auto& pv = variables_[static_cast<std::size_t>(parents[k])];
        if (!pv.is_discrete() || cpt->parent_cardinalities[k] != pv.cardinality())
          throw InvalidArgument("node '" + var.name + "': parent cardinality mismatch");
      }
      const std::size_t q = cpt->num_configs();
      if (cpt->table.size() != q * static_cast<std::size_t>(cpt->cardinality))
        throw InvalidArgument("node '" + var.name + "': CPT row count mismatch");
      for (std::size_t j = 0; j < q; ++j) {
        double total = 0.0;
        for (double p : cpt->row(j)) {
          if (!(p >= 0.0) || !std::isfinite(p))
            throw InvalidArgument("node '" + var.name + "': negative or non-finite CPT entry");
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
          throw InvalidArgument("node '" + var.name + "': CPT row " + std::to_string(j) + " sums to " +
                                std::to_string(total));
      }
    } else {
      const auto* lg = std::get_if<LinearGaussian>(&params_[i]);
      if (!lg) throw InvalidArgument("node '" + var.name + "' is continuous but has a CPT");
      if (lg->coefficients.size() != parents.size())
        throw InvalidArgument("node '" + var.name + "': coefficient count mismatch");
      if (!(lg->variance > 0.0) || !std::isfinite(lg->variance))
        throw InvalidArgument("node '" + var.name + "': residual variance must be positive");
    }
  }
}

const Cpt& BayesNet::cpt(std::size_t node) const {
  const auto* c = std::get_if<Cpt>(&params_.at(node));
  if (!c) throw InvalidArgument("node is not discrete");
  return *c;
}

const LinearGaussian& BayesNet::gaussian(std::size_t node) const {
  const auto* g = std::get_if<LinearGaussian>(&params_.at(node));
  if (!g) throw InvalidArgument("node is not continuous");
  return *g;
}

bool BayesNet::is_discrete() const { return variables_.empty() || variables_.front().is_discrete(); }

std::size_t BayesNet::config_index(std::size_t node, std::span<const int> assignment) const {
  const auto& c = cpt(node);
  const auto& parents = dag_.parents(static_cast<int>(node));
  std::size_t idx = 0;
  for (std::size_t k = 0; k < parents.size(); ++k)
    idx = idx * static_cast<std::size_t>(c.parent_cardinalities[k]) +
          static_cast<std::size_t>(assignment[static_cast<std::size_t>(parents[k])]);
  return idx;
}

BayesNet mle_fit(const Dag& dag, const Dataset& data, double smoothing) {
  if (static_cast<std::size_t>(dag.size()) != data.num_variables())
    throw InvalidArgument("dag size does not match dataset");
  if (!(smoothing >= 0.0)) throw InvalidArgument("smoothing must be non-negative");
  const auto n = data.num_variables();
  std::vector<NodeParams> params;
  params.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& parents = dag.parents(static_cast<int>(i));
    if (data.is_discrete()) {
      std::size_t q = 0;
      const auto counts = detail::family_counts(data, static_cast<int>(i), parents, q);
      Cpt cpt;
      cpt.cardinality = data.cardinality(i);
      for (int p : parents) cpt.parent_cardinalities.push_back(data.cardinality(static_cast<std::size_t>(p)));
      const auto r = static_cast<std::size_t>(cpt.cardinality);
      cpt.table.resize(q * r);
      for (std::size_t j = 0; j < q; ++j) {
        double total = 0.0;
        for (std::size_t k = 0; k < r; ++k) total += counts[j * r + k];
        const double denom = total + static_cast<double>(r) * smoothing;
        if (denom <= 0.0)
          throw InvalidArgument("unobserved configuration " + std::to_string(j) + " of the parents of '" +
                                data.variable(i).name + "'");
        for (std::size_t k = 0; k < r; ++k) cpt.table[j * r + k] = (counts[j * r + k] + smoothing) / denom;
      }
      params.emplace_back(std::move(cpt));
    } else {
      auto fit = detail::ols(data, static_cast<int>(i), parents);
      const double floor = kVarianceFloor * std::max(1.0, marginal_variance(data.values(i)));
      LinearGaussian lg;
      lg.intercept = fit.intercept;
      lg.coefficients = std::move(fit.coefficients);
      lg.variance = std::max(fit.rss / static_cast<double>(data.num_rows()), floor);
      params.emplace_back(std::move(lg));
    }
  }
  return BayesNet(data.variables(), dag, std::move(params));
}

double log_likelihood(const BayesNet& net, const Dataset& data) {
  if (net.variables() != data.variables()) throw InvalidArgument("network and dataset variables differ");
  const auto n = data.num_variables();
  const auto& dag = net.dag();
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& parents = dag.parents(static_cast<int>(i));
    if (data.is_discrete()) {
      std::size_t q = 0;
      const auto counts = detail::family_counts(data, static_cast<int>(i), parents, q);
      const auto& cpt = net.cpt(i);
      for (std::size_t cell = 0; cell < counts.size(); ++cell) {
        if (counts[cell] == 0) continue;
        const double p = cpt.table[cell];
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        total += static_cast<long double>(counts[cell]) * std::log(static_cast<long double>(p));
      }
    } else {
      const auto& g = net.gaussian(i);
      const auto y = data.values(i);
      const double log_norm = -0.5 * std::log(2.0 * M_PI * g.variance);
      for (std::size_t r = 0; r < data.num_rows(); ++r) {
        double mean = g.intercept;
        for (std::size_t k = 0; k < parents.size(); ++k)
          mean += g.coefficients[k] * data.values(static_cast<std::size_t>(parents[k]))[r];
        const double resid = y[r] - mean;
        total += log_norm - 0.5 * resid * resid / g.variance;
      }
    }
  }
  return static_cast<double>(total);
}

Dataset sample(const BayesNet& net, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("sample size must be at least 1");
  Rng rng(seed);
  const auto n = net.size();
  const auto order = net.dag().topological_order();
  if (net.is_discrete()) {
    std::vector<std::vector<int>> columns(n, std::vector<int>(m, 0));
    std::vector<int> row(n, 0);
    for (std::size_t r = 0; r < m; ++r) {
      for (int v : order) {
        const auto node = static_cast<std::size_t>(v);
        const auto& cpt = net.cpt(node);
        const auto probs = cpt.row(net.config_index(node, row));
        const double u = rng.uniform();
        double acc = 0.0;
        int level = cpt.cardinality - 1;
        for (int k = 0; k < cpt.cardinality; ++k) {
          acc += probs[static_cast<std::size_t>(k)];
          if (u < acc) {
            level = k;
            break;
          }
        }
        // Never land on a zero-probability tail level through rounding.
        while (level > 0 && probs[static_cast<std::size_t>(level)] <= 0.0) --level;
        row[node] = level;
        columns[node][r] = level;
      }
    }
    return Dataset::discrete(net.variables(), std::move(columns));
  }
  std::vector<std::vector<double>> columns(n, std::vector<double>(m, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (int v : order) {
      const auto node = static_cast<std::size_t>(v);
      const auto& g = net.gaussian(node);
      const auto& parents = net.dag().parents(v);
      double mean = g.intercept;
      for (std::size_t k = 0; k < parents.size(); ++k)
        mean += g.coefficients[k] * columns[static_cast<std::size_t>(parents[k])][r];
      columns[node][r] = mean + std::sqrt(g.variance) * rng.normal();
    }
  }
  return Dataset::continuous(net.variables(), std::move(columns));
}

BayesNet random_discrete_net(const Dag& dag, std::uint64_t seed, int cardinality, double alpha) {
  if (cardinality < 2) throw InvalidArgument("cardinality must be at least 2");
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(dag.size());
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back(VariableSpec::discrete("x" + std::to_string(i + 1), cardinality));
  std::vector<NodeParams> params;
  for (std::size_t i = 0; i < n; ++i) {
    Cpt cpt;
    cpt.cardinality = cardinality;
    cpt.parent_cardinalities.assign(dag.parents(static_cast<int>(i)).size(), cardinality);
    const auto q = cpt.num_configs();
    for (std::size_t j = 0; j < q; ++j) {
      auto row = rng.dirichlet(static_cast<std::size_t>(cardinality), alpha);
      // Renormalise in long double so rows sum to 1 well inside the 1e-9 check.
      long double s = 0.0L;
      for (double p : row) s += p;
      for (double p : row) cpt.table.push_back(static_cast<double>(p / s));
    }
    params.emplace_back(std::move(cpt));
  }
  return BayesNet(std::move(vars), dag, std::move(params));
}

BayesNet random_gaussian_net(const Dag& dag, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(dag.size());
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back(VariableSpec::continuous("x" + std::to_string(i + 1)));
  std::vector<NodeParams> params;
  for (std::size_t i = 0; i < n; ++i) {
    LinearGaussian g;
    g.intercept = rng.normal();
    for (std::size_t k = 0; k < dag.parents(static_cast<int>(i)).size(); ++k) {
      const double magnitude = 0.5 + rng.uniform();
      g.coefficients.push_back(rng.bernoulli(0.5) ? magnitude : -magnitude);
    }
    g.variance = 1.0;
    params.emplace_back(std::move(g));
  }
  return BayesNet(std::move(vars), dag, std::move(params));
}

}  // namespace ebnet
