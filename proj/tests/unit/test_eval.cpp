#include <doctest.h>

#include <cmath>
#include <set>

#include "ebnet/bayes_net.hpp"
#include "ebnet/error.hpp"
#include "ebnet/eval.hpp"
#include "ebnet/random.hpp"
#include "ebnet/search.hpp"
#include "helpers.hpp"

using namespace ebnet;
using testing::binary;

namespace {

// Robinson's recurrence in plain doubles, independent of the library.
double robinson(int n) {
  std::vector<double> a(static_cast<std::size_t>(n + 1), 0.0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= m; ++k) {
      double c = 1;
      for (int i = 0; i < k; ++i) c = c * (m - i) / (i + 1);
      a[static_cast<std::size_t>(m)] += ((k % 2) ? 1 : -1) * c * std::pow(2.0, k * (m - k)) * a[static_cast<std::size_t>(m - k)];
    }
  return a[static_cast<std::size_t>(n)];
}

std::vector<double> joint_oracle(const BayesNet& net) {
  std::vector<int> cards;
  for (const auto& v : net.variables()) cards.push_back(v.cardinality());
  std::vector<double> out;
  for (const auto& a : testing::assignments(cards)) out.push_back(std::exp(testing::joint_log_prob(net, a)));
  return out;
}

}  // namespace

TEST_CASE("dag enumeration counts") {
  const std::vector<std::size_t> expected{1, 3, 25, 543, 29281};
  for (int n = 1; n <= 5; ++n) {
    const auto dags = enumerate_dags(n);
    CHECK(dags.size() == expected[static_cast<std::size_t>(n - 1)]);
    CHECK(static_cast<double>(dags.size()) == robinson(n));
    CHECK(count_dags(n) == dags.size());
  }
  const auto four = enumerate_dags(4);
  std::set<std::uint64_t> masks;
  for (const auto& d : four) masks.insert(d.mask());
  CHECK(masks.size() == 543);
  CHECK(static_cast<double>(count_dags(8)) == robinson(8));
  CHECK_THROWS_AS(enumerate_dags(6), InvalidArgument);
}

TEST_CASE("markov equivalence") {
  CHECK(markov_equivalent(Dag(3, {{0, 1}, {1, 2}}), Dag(3, {{2, 1}, {1, 0}})));
  CHECK(markov_equivalent(Dag(3, {{0, 1}, {1, 2}}), Dag(3, {{1, 0}, {1, 2}})));
  CHECK_FALSE(markov_equivalent(Dag(3, {{0, 1}, {2, 1}}), Dag(3, {{0, 1}, {1, 2}})));
  CHECK_FALSE(markov_equivalent(Dag(3, {{0, 1}}), Dag(3, {{0, 2}})));
}

TEST_CASE("exact joint") {
  Cpt fair{2, {}, {0.5, 0.5}};
  const BayesNet coins(binary_variables(2), Dag(2), {fair, fair});
  for (double p : exact_joint(coins)) CHECK(p == doctest::Approx(0.25));

  Cpt root{2, {}, {0.3, 0.7}};
  Cpt copy{2, {2}, {1, 0, 0, 1}};
  const BayesNet c(binary_variables(2), Dag(2, {{0, 1}}), {root, copy});
  const auto j = exact_joint(c);
  CHECK(j == std::vector<double>{0.3, 0.0, 0.0, 0.7});

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto net = random_discrete_net(random_dag(4, std::nullopt, 0.5, s), s, 2 + static_cast<int>(s % 2));
    const auto table = exact_joint(net);
    const auto oracle = joint_oracle(net);
    double total = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(table[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
      total += table[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    // Conditionals recomputed from the table reproduce the CPTs.
    const auto back = project(net.variables(), net.dag(), table);
    for (std::size_t v = 0; v < 4; ++v)
      for (std::size_t i = 0; i < net.cpt(v).table.size(); ++i)
        CHECK(std::fabs(back.cpt(v).table[i] - net.cpt(v).table[i]) < 1e-9);
  }
}

TEST_CASE("kl divergence") {
  const auto p = random_discrete_net(Dag(3, {{0, 1}}), 1);
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto a = random_discrete_net(random_dag(3, std::nullopt, 0.5, s), s);
    const auto b = random_discrete_net(random_dag(3, std::nullopt, 0.5, s + 7), s + 9);
    const double kl = kl_divergence(a, b);
    CHECK(kl >= -1e-12);
    if (s < 20) {
      const auto pa = joint_oracle(a), pb = joint_oracle(b);
      double ref = 0;
      for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i] > 0) ref += pa[i] * std::log(pa[i] / pb[i]);
      CHECK(std::fabs(kl - ref) < 1e-12);
    }
  }
  const std::vector<double> x{0.5, 0.5}, y{1.0, 0.0};
  CHECK(std::isinf(kl_divergence(x, y)));
}

TEST_CASE("metrics") {
  const Dag truth(3, {{0, 1}, {1, 2}});
  const auto same = metrics(truth, truth);
  CHECK(same.ppv == 1.0);
  CHECK(same.tpr == 1.0);
  const auto m = metrics(truth, Dag(3, {{0, 1}, {0, 2}}));
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.ppv == 0.5);
  CHECK(m.tpr == 0.5);
  const auto rev = metrics(Dag(2, {{0, 1}}), Dag(2, {{1, 0}}), MetricMode::Skeleton);
  CHECK(rev.tp == 1);
  CHECK(metrics(Dag(2, {{0, 1}}), Dag(2, {{1, 0}})).tp == 0);
  const auto empty = metrics(Dag(3), Dag(3));
  CHECK(empty.ppv == 1.0);
  CHECK(empty.tpr == 1.0);
  CHECK(edge_density(truth) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("landscape of empty-model data has the empty graph as optimum") {
  const auto d = sample(random_discrete_net(Dag(3), 2), 2000, 3);
  const auto rep = landscape(d, ScoreKind::bic(), std::nullopt, Dag(3));
  CHECK(rep.dag_count() == 25);
  bool found = false;
  for (auto i : rep.optima) found = found || rep.dags[i].edge_count() == 0;
  CHECK(found);
  std::size_t total = 0;
  for (auto b : rep.basin_sizes) total += b;
  CHECK(total == 25);
}

TEST_CASE("landscape invariants") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Dag g = random_dag(4, std::nullopt, 0.5, s, 2);
    const auto d = sample(random_discrete_net(g, s), 5000, s);
    const auto rep = landscape(d, ScoreKind::bic(), std::nullopt, g);
    CHECK(rep.dag_count() == 543);
    CHECK(max_equivalence_gap(rep) < 1e-9);
    std::size_t total = 0;
    for (auto b : rep.basin_sizes) total += b;
    CHECK(total == 543);
    // Every optimum has no better AddDelete neighbour.
    for (auto i : rep.optima)
      for (const auto& h : neighborhood(rep.dags[i], std::nullopt, MoveSet::AddDelete))
        CHECK(score(h, d, ScoreKind::bic()).total <= rep.fitness[i] + kImprovementEpsilon);
    const auto constrained = landscape(d, ScoreKind::bic(), transitive_closure(g), g);
    CHECK(constrained.optima.size() <= rep.optima.size());
    for (const auto& dag : constrained.dags) CHECK(transitive_closure(g).contains(dag));
  }
  const auto big = sample(random_discrete_net(Dag(6), 1), 10, 1);
  CHECK_THROWS_AS(landscape(big, ScoreKind::bic()), InvalidArgument);
}

TEST_CASE("submodularity with generative parameters") {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto truth = random_discrete_net(random_dag(4, std::nullopt, 0.5, s, 2), s);
    const auto rep = check_submodularity_exact(truth, 100, s);
    CHECK(rep.trials.size() == 100);
    CHECK(rep.max_lemma1_residual < 1e-9);
    for (const auto& t : rep.trials) {
      CHECK(t.gain_x >= -1e-12);
      CHECK(t.gain_y >= -1e-12);
      if (t.x == t.y) CHECK(t.gain_x == doctest::Approx(t.gain_y));
    }
  }
}

TEST_CASE("lemma 1 identity on random tables") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const int rx = 2 + static_cast<int>(rng.below(2)), ry = 2 + static_cast<int>(rng.below(2)),
              rz = 2 + static_cast<int>(rng.below(2));
    const auto p = rng.dirichlet(static_cast<std::size_t>(rx * ry * rz), 1.0);
    std::vector<double> q(static_cast<std::size_t>(rx * ry));
    for (int y = 0; y < ry; ++y) {
      const auto row = rng.dirichlet(static_cast<std::size_t>(rx), 1.0);
      for (int x = 0; x < rx; ++x) q[static_cast<std::size_t>(y * rx + x)] = row[static_cast<std::size_t>(x)];
    }
    CHECK(lemma1_residual(p, rx, ry, rz, q) < 1e-9);
  }
}

TEST_CASE("synthetic instances") {
  const auto a = synth_instance(6, 0.3, 200, 0.1, 5);
  const auto b = synth_instance(6, 0.3, 200, 0.1, 5);
  CHECK(a.data == b.data);
  CHECK(a.truth == b.truth);
  CHECK(a.data.num_rows() == 200);
  const auto clean = synth_instance(6, 0.3, 200, 0.0, 5);
  CHECK(clean.truth == a.truth);
  const auto flipped = flip_noise(clean.data, 0.0, 1);
  CHECK(flipped == clean.data);
  std::size_t diff = 0;
  const auto noisy = flip_noise(clean.data, 0.2, 1);
  for (std::size_t v = 0; v < 6; ++v)
    for (std::size_t r = 0; r < 200; ++r) diff += noisy.levels(v)[r] != clean.data.levels(v)[r];
  CHECK(static_cast<double>(diff) / 1200.0 == doctest::Approx(0.2).epsilon(0.2));
}

TEST_CASE("baseline is accurate on large clean n = 4 data") {
  SuiteConfig cfg;
  cfg.n = 4;
  cfg.delta = 0.5;
  cfg.m = 10000;
  cfg.repeats = 50;
  cfg.methods = {"hc-k0"};
  cfg.mode = MetricMode::Skeleton;
  cfg.seed = 3;
  cfg.threads = 0;
  const auto rep = synth_suite(cfg);
  REQUIRE(rep.summary.size() == 1);
  CHECK(rep.summary[0].median_ppv >= 0.8);
}

TEST_CASE("suite is reproducible across thread counts") {
  SuiteConfig cfg;
  cfg.n = 5;
  cfg.m = 200;
  cfg.repeats = 3;
  cfg.k_p = 10;
  cfg.k_b = 10;
  cfg.methods = {"hc-k0", "hc-k5", "eb-confidence-holm", "eb-agony-bh", "eb-suppes-none"};
  cfg.seed = 8;
  const auto a = synth_suite(cfg);
  cfg.threads = 4;
  const auto b = synth_suite(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].method == b.rows[i].method);
    CHECK(a.rows[i].metrics.tp == b.rows[i].metrics.tp);
    CHECK(a.rows[i].metrics.fp == b.rows[i].metrics.fp);
  }
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}
