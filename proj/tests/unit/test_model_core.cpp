#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ebnet/bayes_net.hpp"
#include "ebnet/error.hpp"
#include "ebnet/graph.hpp"
#include "ebnet/random.hpp"
#include "ebnet/scoring.hpp"
#include "ebnet/search.hpp"
#include "helpers.hpp"

using namespace ebnet;
using testing::binary;
using testing::counts;

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset::discrete({VariableSpec::discrete("a", 2), VariableSpec::discrete("a", 2)}, {{0}, {1}}),
                  InvalidArgument);
  CHECK_THROWS_AS(Dataset::discrete({VariableSpec::discrete("a", 2)}, {{2}}), InvalidArgument);
  CHECK_THROWS_AS(Dataset::discrete({VariableSpec::discrete("a", 2)}, {{}}), InvalidArgument);
  CHECK_THROWS_AS(Dataset::discrete({VariableSpec::discrete("a", 1)}, {{0}}), InvalidArgument);
  CHECK_THROWS_AS(Dataset::discrete({VariableSpec::discrete("a", 2), VariableSpec::discrete("b", 2)}, {{0, 1}, {1}}),
                  InvalidArgument);
  const auto d = binary({{0, 1, 1}, {1, 1, 0}});
  CHECK(d.num_variables() == 2);
  CHECK(d.num_rows() == 3);
  const std::vector<std::size_t> rows{2, 2, 0};
  const auto s = d.select_rows(rows);
  CHECK(s.levels(0)[0] == 1);
  CHECK(s.levels(1)[2] == 1);
}

TEST_CASE("dag invariants") {
  Dag g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  CHECK(g.creates_cycle(2, 0));
  CHECK_THROWS_AS(g.add_edge(2, 0), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(1, 1), InvalidArgument);
  CHECK(g.has_path(0, 2));
  CHECK_FALSE(g.has_path(2, 0));
  CHECK(g.topological_order() == std::vector<int>{0, 1, 2});
  const std::vector<Edge> cyc{{0, 1}, {1, 0}};
  CHECK_FALSE(is_acyclic(2, cyc));
  CHECK_THROWS_AS(Poset(2, cyc), InvalidArgument);
  const auto closure = transitive_closure(g);
  CHECK(closure.allows(0, 2));
  CHECK(closure.edge_count() == 3);
}

TEST_CASE("mle_fit: frequencies and smoothing") {
  const auto d = binary({counts(7, 3)});
  const auto net0 = mle_fit(Dag(1), d, 0.0);
  CHECK(net0.cpt(0).prob(0, 0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(net0.cpt(0).prob(0, 1) == doctest::Approx(0.7).epsilon(1e-12));
  const auto net1 = mle_fit(Dag(1), d, 1.0);
  CHECK(net1.cpt(0).prob(0, 0) == doctest::Approx(4.0 / 12.0).epsilon(1e-12));
  CHECK(net1.cpt(0).prob(0, 1) == doctest::Approx(8.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("mle_fit: deterministic copy and unobserved configuration") {
  const auto a = counts(6, 4);
  const auto d = binary({a, a});
  const auto net = mle_fit(Dag(2, {{0, 1}}), d, 0.0);
  CHECK(net.cpt(1).prob(0, 0) == 1.0);
  CHECK(net.cpt(1).prob(1, 1) == 1.0);
  const auto three = Dataset::discrete({VariableSpec::discrete("a", 3), VariableSpec::discrete("b", 2)}, {{0, 0, 1, 1}, {0, 1, 0, 1}});
  CHECK_THROWS_WITH_AS(mle_fit(Dag(2, {{0, 1}}), three, 0.0), doctest::Contains("unobserved configuration"),
                       InvalidArgument);
  CHECK_NOTHROW(mle_fit(Dag(2, {{0, 1}}), three, 1.0));
}

TEST_CASE("log_likelihood examples") {
  const auto d = binary({{0, 0, 1, 1}, {0, 1, 0, 1}});
  const auto net = mle_fit(Dag(2), d, 0.0);
  CHECK(log_likelihood(net, d) == doctest::Approx(-8.0 * std::log(2.0)).epsilon(1e-12));

  const auto a = counts(6, 4);
  const auto copy = binary({a, a});
  const auto cn = mle_fit(Dag(2, {{0, 1}}), copy, 0.0);
  CHECK(log_likelihood(cn, copy) == doctest::Approx(6 * std::log(0.6) + 4 * std::log(0.4)).epsilon(1e-12));

  // Zero-probability cell: sentinel, not an exception.
  const auto other = binary({{1, 0}, {0, 0}});
  CHECK(std::isinf(log_likelihood(cn, other)));
  CHECK(log_likelihood(cn, other) < 0);
}

TEST_CASE("log_likelihood matches joint enumeration oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dag g = random_dag(3, std::nullopt, 0.6, seed);
    const auto net = random_discrete_net(g, seed + 100, 2 + static_cast<int>(seed % 2));
    const auto d = sample(net, 50, seed + 200);
    double oracle = 0.0;
    for (std::size_t r = 0; r < d.num_rows(); ++r) oracle += testing::joint_log_prob(net, testing::row_of(d, r));
    CHECK(log_likelihood(net, d) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("sample examples") {
  Cpt cpt{2, {}, {0.0, 1.0}};
  const BayesNet point({VariableSpec::discrete("a", 2)}, Dag(1), {cpt});
  const auto d = sample(point, 100, 1);
  for (int v : d.levels(0)) CHECK(v == 1);

  Cpt fair{2, {}, {0.5, 0.5}};
  const BayesNet coin({VariableSpec::discrete("a", 2)}, Dag(1), {fair});
  const auto big = sample(coin, 100000, 5);
  double ones = 0;
  for (int v : big.levels(0)) ones += v;
  CHECK(std::fabs(ones / 100000.0 - 0.5) < 0.01);

  Cpt copy{2, {2}, {1.0, 0.0, 0.0, 1.0}};
  const BayesNet chain(binary_variables(2), Dag(2, {{0, 1}}), {fair, copy});
  const auto c = sample(chain, 50, 9);
  for (std::size_t r = 0; r < 50; ++r) CHECK(c.levels(0)[r] == c.levels(1)[r]);
  CHECK(sample(chain, 50, 9) == c);
}

TEST_CASE("bayes net invariants are enforced") {
  Cpt bad{2, {}, {0.5, 0.4}};
  CHECK_THROWS_AS(BayesNet({VariableSpec::discrete("a", 2)}, Dag(1), {bad}), InvalidArgument);
  Cpt short_rows{2, {2}, {0.5, 0.5}};
  CHECK_THROWS_AS(BayesNet(binary_variables(2), Dag(2, {{0, 1}}), {Cpt{2, {}, {0.5, 0.5}}, short_rows}),
                  InvalidArgument);
  LinearGaussian g{0.0, {}, 0.0};
  CHECK_THROWS_AS(BayesNet({VariableSpec::continuous("x")}, Dag(1), {g}), InvalidArgument);
}

TEST_CASE("mle beats perturbed parameters") {
  const Dag g(3, {{0, 1}, {1, 2}});
  const auto truth = random_discrete_net(g, 3);
  const auto d = sample(truth, 500, 4);
  const auto fitted = mle_fit(g, d, 0.0);
  const double best = log_likelihood(fitted, d);
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    std::vector<NodeParams> params;
    for (std::size_t v = 0; v < 3; ++v) {
      Cpt c = fitted.cpt(v);
      for (std::size_t j = 0; j < c.num_configs(); ++j) {
        const double p = std::clamp(c.table[j * 2] + 0.1 * (rng.uniform() - 0.5), 1e-6, 1 - 1e-6);
        c.table[j * 2] = p;
        c.table[j * 2 + 1] = 1 - p;
      }
      params.emplace_back(c);
    }
    const BayesNet other(fitted.variables(), g, params);
    CHECK(log_likelihood(other, d) <= best + 1e-9);
  }
}

TEST_CASE("adding an edge never lowers the maximum likelihood") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto truth = random_discrete_net(random_dag(4, std::nullopt, 0.5, seed), seed);
    const auto d = sample(truth, 300, seed);
    Dag g = random_dag(4, std::nullopt, 0.3, seed + 7);
    for (int p = 0; p < 4; ++p)
      for (int c = 0; c < 4; ++c) {
        if (p == c || g.has_edge(p, c) || g.creates_cycle(p, c)) continue;
        Dag h = g;
        h.add_edge(p, c);
        // Maximised LL; unobserved parent configurations contribute nothing.
        CHECK(score(h, d, ScoreKind::ll()).total >= score(g, d, ScoreKind::ll()).total - 1e-9);
      }
  }
}

TEST_CASE("sample and fit round trip recovers CPTs") {
  const Dag g(3, {{0, 1}, {0, 2}, {1, 2}});
  const auto truth = random_discrete_net(g, 21);
  const auto fitted = mle_fit(g, sample(truth, 100000, 22), 1.0);
  for (std::size_t v = 0; v < 3; ++v)
    for (std::size_t i = 0; i < truth.cpt(v).table.size(); ++i)
      CHECK(std::fabs(truth.cpt(v).table[i] - fitted.cpt(v).table[i]) < 0.02);
}

TEST_CASE("linear gaussian fit") {
  const Dag g(2, {{0, 1}});
  LinearGaussian root{1.0, {}, 1.0};
  LinearGaussian child{-0.5, {2.0}, 0.25};
  const BayesNet truth({VariableSpec::continuous("x"), VariableSpec::continuous("y")}, g, {root, child});
  const auto d = sample(truth, 20000, 3);
  const auto fitted = mle_fit(g, d);
  CHECK(fitted.gaussian(1).coefficients[0] == doctest::Approx(2.0).epsilon(0.02));
  CHECK(fitted.gaussian(1).intercept == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(fitted.gaussian(1).variance == doctest::Approx(0.25).epsilon(0.05));
  CHECK(std::isfinite(log_likelihood(fitted, d)));
  // Duplicate regressor makes the design singular.
  const auto dup = Dataset::continuous({VariableSpec::continuous("a"), VariableSpec::continuous("b"), VariableSpec::continuous("c")},
                                       {{1, 2, 3, 4}, {1, 2, 3, 4}, {0, 1, 0, 1}});
  CHECK_THROWS_AS(mle_fit(Dag(3, {{0, 2}, {1, 2}}), dup), InvalidArgument);
}
