#include "ebnet/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ebnet/error.hpp"
#include "ebnet/parallel.hpp"
#include "ebnet/random.hpp"
#include "ebnet/search.hpp"

namespace ebnet {

namespace {

constexpr std::size_t kMaxJointStates = std::size_t{1} << 20;

void enumerate_from(Dag& dag, const std::vector<Edge>& pairs, std::size_t at, std::vector<Dag>& out) {
  if (at == pairs.size()) {
    out.push_back(dag);
    return;
  }
  enumerate_from(dag, pairs, at + 1, out);
  const Edge e = pairs[at];
  if (!dag.creates_cycle(e.parent, e.child)) {
    dag.add_edge(e);
    enumerate_from(dag, pairs, at + 1, out);
    dag.remove_edge(e);
  }
}

// Skeleton as a sorted list of unordered pairs plus v-structures (a, c, b), a < b.
std::pair<std::vector<Edge>, std::vector<std::array<int, 3>>> equivalence_key(const Dag& dag) {
  std::vector<Edge> skeleton;
  for (const auto& e : dag.edges()) skeleton.push_back({std::min(e.parent, e.child), std::max(e.parent, e.child)});
  std::sort(skeleton.begin(), skeleton.end());
  std::vector<std::array<int, 3>> vees;
  for (int c = 0; c < dag.size(); ++c) {
    const auto& ps = dag.parents(c);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (!dag.has_edge(ps[i], ps[j]) && !dag.has_edge(ps[j], ps[i])) vees.push_back({ps[i], c, ps[j]});
  }
  std::sort(vees.begin(), vees.end());
  return {skeleton, vees};
}

std::size_t state_count(const std::vector<VariableSpec>& vars) {
  std::size_t total = 1;
  for (const auto& v : vars) {
    if (!v.is_discrete()) throw InvalidArgument("exact joint requires discrete variables");
    total *= static_cast<std::size_t>(v.cardinality());
    if (total > kMaxJointStates) throw InvalidArgument("joint state space exceeds 2^20");
  }
  return total;
}

// Decodes `state` into per-variable levels, variable 0 most significant.
void decode(std::size_t state, const std::vector<VariableSpec>& vars, std::vector<int>& levels) {
  for (std::size_t i = vars.size(); i-- > 0;) {
    const auto r = static_cast<std::size_t>(vars[i].cardinality());
    levels[i] = static_cast<int>(state % r);
    state /= r;
  }
}

}  // namespace

std::vector<Dag> enumerate_dags(int n) {
  if (n < 0 || n > kMaxEnumerableNodes) throw InvalidArgument("enumerate_dags supports 0 <= n <= 5");
  std::vector<Edge> pairs;
  for (int p = 0; p < n; ++p)
    for (int c = 0; c < n; ++c)
      if (p != c) pairs.push_back({p, c});
  std::vector<Dag> out;
  Dag dag(n);
  enumerate_from(dag, pairs, 0, out);
  return out;
}

std::uint64_t count_dags(int n) {
  if (n < 0 || n > 10) throw InvalidArgument("count_dags supports 0 <= n <= 10");
  std::vector<__int128> a(static_cast<std::size_t>(n) + 1, 0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    __int128 total = 0;
    __int128 binom = 1;
    for (int k = 1; k <= m; ++k) {
      binom = binom * (m - k + 1) / k;
      const __int128 term = binom * (static_cast<__int128>(1) << (k * (m - k))) * a[static_cast<std::size_t>(m - k)];
      total += (k % 2 == 1) ? term : -term;
    }
    a[static_cast<std::size_t>(m)] = total;
  }
  return static_cast<std::uint64_t>(a[static_cast<std::size_t>(n)]);
}

bool markov_equivalent(const Dag& a, const Dag& b) {
  return a.size() == b.size() && equivalence_key(a) == equivalence_key(b);
}

LandscapeReport landscape(const Dataset& data, ScoreKind kind, const std::optional<Poset>& poset,
                          const std::optional<Dag>& truth) {
  const int n = static_cast<int>(data.num_variables());
  if (n > kMaxEnumerableNodes) throw InvalidArgument("landscape supports at most 5 variables");
  if (poset && poset->size() != n) throw InvalidArgument("poset size does not match dataset");
  if (truth && truth->size() != n) throw InvalidArgument("true dag size does not match dataset");

  LandscapeReport report;
  for (auto& dag : enumerate_dags(n))
    if (!poset || poset->contains(dag)) report.dags.push_back(std::move(dag));
  const auto count = report.dags.size();
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < count; ++i) index.emplace(report.dags[i].mask(), i);

  const FamilyScorer scorer(data, kind);
  report.fitness.resize(count);
  for (std::size_t i = 0; i < count; ++i) report.fitness[i] = score(report.dags[i], scorer).total;

  // Steepest-ascent successor with the climb's tie-break; npos marks an optimum.
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(count, npos);
  for (std::size_t i = 0; i < count; ++i) {
    const Dag& dag = report.dags[i];
    double best = kImprovementEpsilon;
    for (const auto& mv : legal_moves(dag, poset, MoveSet::AddDelete)) {
      const Dag moved = apply(dag, mv);
      const int c = mv.edge.child;
      const double gain = scorer.family(c, moved.parents(c)) - scorer.family(c, dag.parents(c));
      if (gain > best) {
        best = gain;
        next[i] = index.at(moved.mask());
      }
    }
  }
  std::vector<std::size_t> optimum_slot(count, npos);
  for (std::size_t i = 0; i < count; ++i) {
    if (next[i] == npos) {
      optimum_slot[i] = report.optima.size();
      report.optima.push_back(i);
    }
  }
  report.basin.assign(count, npos);
  report.basin_sizes.assign(report.optima.size(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::size_t> path;
    std::size_t v = i;
    while (report.basin[v] == npos && next[v] != npos) {
      path.push_back(v);
      v = next[v];
    }
    const std::size_t slot = report.basin[v] != npos ? report.basin[v] : optimum_slot[v];
    report.basin[v] = slot;
    for (auto u : path) report.basin[u] = slot;
  }
  for (auto slot : report.basin) ++report.basin_sizes[slot];

  report.successor = next;
  report.unimodal = report.optima.size() == 1;
  if (truth) {
    const double f = score(*truth, scorer).total;
    std::size_t above = 0;
    for (double g : report.fitness)
      if (g > f + kImprovementEpsilon) ++above;
    report.true_model_rank = above + 1;
    report.max_at_true = report.unimodal && report.dags[report.optima.front()] == *truth;
  }
  return report;
}

double max_equivalence_gap(const LandscapeReport& report) {
  std::map<decltype(equivalence_key(Dag())), std::pair<double, double>> range;
  for (std::size_t i = 0; i < report.dags.size(); ++i) {
    const double f = report.fitness[i];
    auto [it, fresh] = range.try_emplace(equivalence_key(report.dags[i]), f, f);
    if (!fresh) {
      it->second.first = std::min(it->second.first, f);
      it->second.second = std::max(it->second.second, f);
    }
  }
  double gap = 0.0;
  for (const auto& [key, lohi] : range) gap = std::max(gap, lohi.second - lohi.first);
  return gap;
}

std::vector<double> exact_joint(const BayesNet& net) {
  const auto& vars = net.variables();
  const auto states = state_count(vars);
  std::vector<double> joint(states);
  std::vector<int> levels(vars.size());
  for (std::size_t s = 0; s < states; ++s) {
    decode(s, vars, levels);
    double p = 1.0;
    for (std::size_t v = 0; v < vars.size() && p > 0.0; ++v)
      p *= net.cpt(v).prob(net.config_index(v, levels), levels[v]);
    joint[s] = p;
  }
  return joint;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("distributions differ in size");
  long double total = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    total += static_cast<long double>(p[i]) * std::log(static_cast<long double>(p[i]) / q[i]);
  }
  return static_cast<double>(total);
}

double kl_divergence(const BayesNet& p, const BayesNet& q) {
  if (p.variables() != q.variables()) throw InvalidArgument("networks have different variables");
  return kl_divergence(exact_joint(p), exact_joint(q));
}

BayesNet project(const std::vector<VariableSpec>& variables, const Dag& dag, std::span<const double> joint) {
  const auto states = state_count(variables);
  if (joint.size() != states) throw InvalidArgument("joint table size does not match variables");
  if (dag.size() != static_cast<int>(variables.size())) throw InvalidArgument("dag size does not match variables");
  std::vector<int> levels(variables.size());
  std::vector<NodeParams> params;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    Cpt cpt;
    cpt.cardinality = variables[v].cardinality();
    for (int p : dag.parents(static_cast<int>(v)))
      cpt.parent_cardinalities.push_back(variables[static_cast<std::size_t>(p)].cardinality());
    const auto r = static_cast<std::size_t>(cpt.cardinality);
    std::vector<long double> mass(cpt.num_configs() * r, 0.0L);
    for (std::size_t s = 0; s < states; ++s) {
      decode(s, variables, levels);
      std::size_t config = 0;
      for (int p : dag.parents(static_cast<int>(v)))
        config = config * static_cast<std::size_t>(variables[static_cast<std::size_t>(p)].cardinality()) +
                 static_cast<std::size_t>(levels[static_cast<std::size_t>(p)]);
      mass[config * r + static_cast<std::size_t>(levels[v])] += joint[s];
    }
    cpt.table.resize(mass.size());
    for (std::size_t j = 0; j < cpt.num_configs(); ++j) {
      long double total = 0.0L;
      for (std::size_t k = 0; k < r; ++k) total += mass[j * r + k];
      for (std::size_t k = 0; k < r; ++k)
        cpt.table[j * r + k] = total > 0.0L ? static_cast<double>(mass[j * r + k] / total) : 1.0 / static_cast<double>(r);
    }
    params.emplace_back(std::move(cpt));
  }
  return BayesNet(variables, dag, std::move(params));
}

double lemma1_residual(std::span<const double> p, int rx, int ry, int rz, std::span<const double> q) {
  const auto ux = static_cast<std::size_t>(rx), uy = static_cast<std::size_t>(ry), uz = static_cast<std::size_t>(rz);
  if (p.size() != ux * uy * uz || q.size() != ux * uy) throw InvalidArgument("table sizes do not match dimensions");
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return static_cast<long double>(p[(x * uy + y) * uz + z]); };
  std::vector<long double> py(uy, 0.0L), pyz(uy * uz, 0.0L);
  for (std::size_t x = 0; x < ux; ++x)
    for (std::size_t y = 0; y < uy; ++y)
      for (std::size_t z = 0; z < uz; ++z) {
        py[y] += at(x, y, z);
        pyz[y * uz + z] += at(x, y, z);
      }
  long double conditional_kl = 0.0L, joint_term = 0.0L, h_z_given_y = 0.0L;
  for (std::size_t x = 0; x < ux; ++x)
    for (std::size_t y = 0; y < uy; ++y)
      for (std::size_t z = 0; z < uz; ++z) {
        const long double pxyz = at(x, y, z);
        if (pxyz <= 0.0L) continue;
        const long double qxy = q[y * ux + x];
        conditional_kl += pxyz * std::log(pxyz / pyz[y * uz + z] / qxy);
        joint_term += pxyz * std::log(pxyz / (py[y] * qxy));
      }
  for (std::size_t y = 0; y < uy; ++y)
    for (std::size_t z = 0; z < uz; ++z) {
      const long double pz = pyz[y * uz + z];
      if (pz > 0.0L) h_z_given_y -= pz * std::log(pz / py[y]);
    }
  return static_cast<double>(std::fabs(conditional_kl - joint_term - h_z_given_y));
}

namespace {

struct Chain {
  Dag x;
  Dag y;
  Edge e;
};

Chain sample_chain(int n, Rng& rng) {
  for (;;) {
    const Dag y = random_dag(n, std::nullopt, 0.5, rng.next());
    Dag x(n);
    for (const auto& e : y.edges())
      if (rng.bernoulli(0.5)) x.add_edge(e);
    std::vector<Edge> candidates;
    for (int p = 0; p < n; ++p)
      for (int c = 0; c < n; ++c)
        if (p != c && !y.has_edge(p, c) && !y.creates_cycle(p, c)) candidates.push_back({p, c});
    if (candidates.empty()) continue;
    return {x, y, candidates[static_cast<std::size_t>(rng.below(candidates.size()))]};
  }
}

Dag plus(const Dag& dag, Edge e) {
  Dag out = dag;
  out.add_edge(e);
  return out;
}

// Conditional-KL decomposition identity on family (x = e.child, y = pa_X(x), z = e.parent) of joint `p`, with
// q(x|y) read from `fitted` at the child.
double family_lemma1(const std::vector<VariableSpec>& vars, std::span<const double> p, const BayesNet& fitted,
                     Edge e) {
  const int child = e.child;
  const auto& parents = fitted.dag().parents(child);
  const int rx = vars[static_cast<std::size_t>(child)].cardinality();
  const int rz = vars[static_cast<std::size_t>(e.parent)].cardinality();
  const auto& cpt = fitted.cpt(static_cast<std::size_t>(child));
  const int ry = static_cast<int>(cpt.num_configs());
  std::vector<double> pxyz(static_cast<std::size_t>(rx * ry * rz), 0.0);
  std::vector<int> levels(vars.size());
  for (std::size_t s = 0; s < p.size(); ++s) {
    decode(s, vars, levels);
    std::size_t y = 0;
    for (int q : parents)
      y = y * static_cast<std::size_t>(vars[static_cast<std::size_t>(q)].cardinality()) +
          static_cast<std::size_t>(levels[static_cast<std::size_t>(q)]);
    const auto x = static_cast<std::size_t>(levels[static_cast<std::size_t>(child)]);
    const auto z = static_cast<std::size_t>(levels[static_cast<std::size_t>(e.parent)]);
    pxyz[(x * static_cast<std::size_t>(ry) + y) * static_cast<std::size_t>(rz) + z] += p[s];
  }
  return lemma1_residual(pxyz, rx, ry, rz, cpt.table);
}

void summarize(SubmodReport& report) {
  std::vector<double> magnitudes;
  for (const auto& t : report.trials) {
    const double excess = t.gain_y - t.gain_x;
    if (excess > kSubmodTolerance) magnitudes.push_back(excess);
    if (t.delta_y - t.delta_x > kImprovementEpsilon) ++report.score_violations;
    report.max_lemma1_residual = std::max(report.max_lemma1_residual, t.lemma1_residual);
  }
  report.violations = static_cast<int>(magnitudes.size());
  report.violation_fraction =
      report.trials.empty() ? 0.0 : static_cast<double>(report.violations) / static_cast<double>(report.trials.size());
  report.median_violation = magnitudes.empty() ? 0.0 : median(magnitudes);
  report.max_violation = magnitudes.empty() ? 0.0 : *std::max_element(magnitudes.begin(), magnitudes.end());
}

std::vector<double> empirical_joint(const Dataset& data) {
  const auto& vars = data.variables();
  std::vector<double> joint(state_count(vars), 0.0);
  const double weight = 1.0 / static_cast<double>(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    std::size_t s = 0;
    for (std::size_t v = 0; v < vars.size(); ++v)
      s = s * static_cast<std::size_t>(vars[v].cardinality()) + static_cast<std::size_t>(data.levels(v)[r]);
    joint[s] += weight;
  }
  return joint;
}

}  // namespace

SubmodReport check_submodularity(const Dataset& data, ScoreKind kind, int trials, std::uint64_t seed) {
  if (!data.is_discrete()) throw InvalidArgument("submodularity check requires discrete data");
  const int n = static_cast<int>(data.num_variables());
  if (n > 4) throw InvalidArgument("submodularity check supports at most 4 variables");
  if (trials < 0) throw InvalidArgument("trial count must be non-negative");
  const FamilyScorer scorer(data, kind);
  const auto p = empirical_joint(data);
  auto fit = [&](const Dag& dag) {
    try {
      return mle_fit(dag, data, 0.0);
    } catch (const InvalidArgument&) {
      return mle_fit(dag, data, kDefaultSmoothing);
    }
  };
  SubmodReport report;
  report.mode = "mle";
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto chain = sample_chain(n, rng);
    const auto fx = fit(chain.x), fxe = fit(plus(chain.x, chain.e));
    const auto fy = fit(chain.y), fye = fit(plus(chain.y, chain.e));
    SubmodTrial trial{chain.x, chain.y, chain.e};
    trial.gain_x = kl_divergence(fxe, fx);
    trial.gain_y = kl_divergence(fye, fy);
    trial.delta_x = discrete_derivative(chain.e, chain.x, scorer);
    trial.delta_y = discrete_derivative(chain.e, chain.y, scorer);
    trial.lemma1_residual = family_lemma1(data.variables(), p, fx, chain.e);
    report.trials.push_back(std::move(trial));
  }
  summarize(report);
  return report;
}

SubmodReport check_submodularity_exact(const BayesNet& truth, int trials, std::uint64_t seed) {
  const int n = static_cast<int>(truth.size());
  if (n > 4) throw InvalidArgument("submodularity check supports at most 4 variables");
  if (trials < 0) throw InvalidArgument("trial count must be non-negative");
  const auto& vars = truth.variables();
  const auto p = exact_joint(truth);
  auto fit = [&](const Dag& dag) { return exact_joint(project(vars, dag, p)); };
  SubmodReport report;
  report.mode = "exact";
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto chain = sample_chain(n, rng);
    SubmodTrial trial{chain.x, chain.y, chain.e};
    trial.gain_x = kl_divergence(fit(plus(chain.x, chain.e)), fit(chain.x));
    trial.gain_y = kl_divergence(fit(plus(chain.y, chain.e)), fit(chain.y));
    trial.delta_x = trial.gain_x;
    trial.delta_y = trial.gain_y;
    trial.lemma1_residual = family_lemma1(vars, p, project(vars, chain.x, p), chain.e);
    report.trials.push_back(std::move(trial));
  }
  summarize(report);
  return report;
}

EvalMetrics metrics(const Dag& truth, const Dag& inferred, MetricMode mode) {
  if (truth.size() != inferred.size()) throw InvalidArgument("dags differ in size");
  auto edge_set = [mode](const Dag& dag) {
    std::set<Edge> out;
    for (const auto& e : dag.edges())
      out.insert(mode == MetricMode::Directed ? e : Edge{std::min(e.parent, e.child), std::max(e.parent, e.child)});
    return out;
  };
  const auto t = edge_set(truth), i = edge_set(inferred);
  EvalMetrics out;
  for (const auto& e : i)
    if (t.count(e)) ++out.tp;
  out.fp = static_cast<int>(i.size()) - out.tp;
  out.fn = static_cast<int>(t.size()) - out.tp;
  out.ppv = out.tp + out.fp == 0 ? 1.0 : static_cast<double>(out.tp) / (out.tp + out.fp);
  out.tpr = out.tp + out.fn == 0 ? 1.0 : static_cast<double>(out.tp) / (out.tp + out.fn);
  return out;
}

double edge_density(const Dag& dag) {
  const int n = dag.size();
  if (n < 2) return 0.0;
  return static_cast<double>(dag.edge_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
}

Dataset flip_noise(const Dataset& data, double nu, std::uint64_t seed) {
  if (!(nu >= 0.0 && nu < 0.5)) throw InvalidArgument("noise rate must lie in [0, 0.5)");
  if (!data.is_discrete()) throw InvalidArgument("bit-flip noise requires binary data");
  for (const auto& v : data.variables())
    if (v.cardinality() != 2) throw InvalidArgument("bit-flip noise requires binary data");
  if (nu == 0.0) return data;
  Rng rng(seed);
  std::vector<std::vector<int>> columns;
  for (std::size_t v = 0; v < data.num_variables(); ++v) {
    const auto col = data.levels(v);
    columns.emplace_back(col.begin(), col.end());
    for (auto& x : columns.back())
      if (rng.bernoulli(nu)) x = 1 - x;
  }
  return Dataset::discrete(data.variables(), std::move(columns));
}

SynthInstance synth_instance(int n, double delta, std::size_t m, double nu, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (m < 1) throw InvalidArgument("m must be at least 1");
  if (!(nu >= 0.0 && nu < 0.5)) throw InvalidArgument("noise rate must lie in [0, 0.5)");
  const Dag dag = random_dag(n, std::nullopt, delta, Rng::derive(seed, 1));
  BayesNet truth = random_discrete_net(dag, Rng::derive(seed, 2));
  Dataset data = flip_noise(sample(truth, m, Rng::derive(seed, 3)), nu, Rng::derive(seed, 4));
  return {std::move(truth), std::move(data)};
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty list");
  std::sort(values.begin(), values.end());
  const auto k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

namespace {

struct MethodSpec {
  std::string name;
  bool eb = false;
  int restarts = 0;
  PosetMethod poset = PosetMethod::Confidence;
  Correction correction = Correction::Holm;
};

MethodSpec parse_method(const std::string& name) {
  MethodSpec spec{name};
  if (name.rfind("hc-k", 0) == 0) {
    try {
      std::size_t used = 0;
      spec.restarts = std::stoi(name.substr(4), &used);
      if (used == name.size() - 4 && spec.restarts >= 0) return spec;
    } catch (const std::exception&) {
    }
  } else if (name.rfind("eb-", 0) == 0) {
    const auto dash = name.find('-', 3);
    if (dash != std::string::npos) {
      const auto poset = name.substr(3, dash - 3);
      spec.eb = true;
      if (poset == "confidence") spec.poset = PosetMethod::Confidence;
      else if (poset == "agony") spec.poset = PosetMethod::Agony;
      else if (poset == "suppes") spec.poset = PosetMethod::Suppes;
      else throw InvalidArgument("unknown method '" + name + "'");
      spec.correction = parse_correction(name.substr(dash + 1));
      return spec;
    }
  }
  throw InvalidArgument("unknown method '" + name + "' (expected hc-k<N> or eb-<poset>-<correction>)");
}

}  // namespace

SuiteReport synth_suite(const SuiteConfig& cfg) {
  if (cfg.repeats < 1) throw InvalidArgument("repeats must be at least 1");
  std::vector<MethodSpec> methods;
  for (const auto& name : cfg.methods) methods.push_back(parse_method(name));
  auto uses = [&](PosetMethod p) {
    return std::any_of(methods.begin(), methods.end(), [&](const MethodSpec& m) { return m.eb && m.poset == p; });
  };

  const auto reps = static_cast<std::size_t>(cfg.repeats);
  std::vector<std::vector<SuiteRow>> rows(reps);
  std::vector<std::optional<PosetComparison>> posets(reps);
  std::vector<double> densities(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const auto inst = synth_instance(cfg.n, cfg.delta, cfg.m, cfg.nu, Rng::derive(cfg.seed, 10, r));
    const auto& truth = inst.truth.dag();
    densities[r] = edge_density(truth);
    const std::uint64_t method_seed = Rng::derive(cfg.seed, 11, r);
    EbConfig eb;
    eb.k_p = cfg.k_p;
    eb.k_b = cfg.k_b;
    eb.alpha = cfg.alpha;
    eb.search.kind = cfg.kind;
    eb.seed = method_seed;

    std::map<PosetMethod, PhaseOne> phase_one;
    if (uses(PosetMethod::Confidence) || uses(PosetMethod::Agony)) {
      eb.poset_method = PosetMethod::Confidence;
      auto conf = build_poset(inst.data, eb);
      PhaseOne agony{break_loops_agony(*conf.consensus), conf.consensus};
      if (uses(PosetMethod::Confidence) && uses(PosetMethod::Agony)) {
        PosetComparison cmp;
        cmp.repeat = static_cast<int>(r);
        cmp.confidence_edges = conf.poset.edge_count();
        cmp.agony_edges = agony.poset.edge_count();
        for (const auto& e : conf.poset.edges())
          if (!agony.poset.allows(e.parent, e.child)) ++cmp.missing;
        cmp.consensus = *conf.consensus;
        posets[r] = std::move(cmp);
      }
      phase_one.emplace(PosetMethod::Confidence, std::move(conf));
      phase_one.emplace(PosetMethod::Agony, std::move(agony));
    }
    if (uses(PosetMethod::Suppes)) {
      eb.poset_method = PosetMethod::Suppes;
      phase_one.emplace(PosetMethod::Suppes, build_poset(inst.data, eb));
    }
    std::map<PosetMethod, Ensembles> ensembles;
    for (const auto& method : methods) {
      SuiteRow row;
      row.repeat = static_cast<int>(r);
      row.method = method.name;
      Dag inferred;
      if (!method.eb) {
        SearchConfig search;
        search.kind = cfg.kind;
        search.restarts = method.restarts;
        search.seed = method_seed;
        inferred = hill_climb(inst.data, search).dag;
      } else {
        const auto& poset = phase_one.at(method.poset).poset;
        auto it = ensembles.find(method.poset);
        if (it == ensembles.end())
          it = ensembles.emplace(method.poset, fit_ensembles(inst.data, poset, eb.k_b, eb.search,
                                                             Rng::derive(method_seed, 2, 0))).first;
        const auto report = test_edges(it->second.data, it->second.null, poset, cfg.alpha, method.correction);
        inferred = Dag(cfg.n, report.accepted_edges());
      }
      row.metrics = metrics(truth, inferred, cfg.mode);
      row.density = edge_density(inferred);
      rows[r].push_back(std::move(row));
    }
  });

  SuiteReport report;
  report.config = cfg;
  for (auto& per_repeat : rows)
    for (auto& row : per_repeat) report.rows.push_back(std::move(row));
  for (auto& cmp : posets)
    if (cmp) report.posets.push_back(std::move(*cmp));
  report.true_density = std::accumulate(densities.begin(), densities.end(), 0.0) / static_cast<double>(reps);
  for (const auto& method : methods) {
    std::vector<double> ppv, tpr, density;
    for (const auto& row : report.rows) {
      if (row.method != method.name) continue;
      ppv.push_back(row.metrics.ppv);
      tpr.push_back(row.metrics.tpr);
      density.push_back(row.density);
    }
    SuiteSummary s;
    s.method = method.name;
    s.median_ppv = median(ppv);
    s.median_tpr = median(tpr);
    s.mean_ppv = std::accumulate(ppv.begin(), ppv.end(), 0.0) / static_cast<double>(ppv.size());
    s.mean_tpr = std::accumulate(tpr.begin(), tpr.end(), 0.0) / static_cast<double>(tpr.size());
    s.mean_density = std::accumulate(density.begin(), density.end(), 0.0) / static_cast<double>(density.size());
    report.summary.push_back(s);
  }
  return report;
}

}  // namespace ebnet
