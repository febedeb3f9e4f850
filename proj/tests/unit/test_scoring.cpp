#include <doctest.h>

#include <cmath>
#include <map>

#include "ebnet/bayes_net.hpp"
#include "ebnet/error.hpp"
#include "ebnet/scoring.hpp"
#include "ebnet/search.hpp"
#include "helpers.hpp"

using namespace ebnet;
using testing::binary;
using testing::counts;

namespace {

// Independent count-based family oracles.
struct FamilyCounts {
  std::map<std::vector<int>, std::vector<double>> table;
  int r = 2;
};

FamilyCounts count_family(const Dataset& d, int child, const std::vector<int>& parents) {
  FamilyCounts fc;
  fc.r = d.cardinality(static_cast<std::size_t>(child));
  for (std::size_t row = 0; row < d.num_rows(); ++row) {
    std::vector<int> key;
    for (int p : parents) key.push_back(d.levels(static_cast<std::size_t>(p))[row]);
    auto& v = fc.table[key];
    v.resize(static_cast<std::size_t>(fc.r), 0.0);
    v[static_cast<std::size_t>(d.levels(static_cast<std::size_t>(child))[row])] += 1;
  }
  return fc;
}

double ll_oracle(const Dataset& d, int child, const std::vector<int>& parents) {
  double ll = 0;
  for (const auto& [k, v] : count_family(d, child, parents).table) {
    double n = 0;
    for (double c : v) n += c;
    for (double c : v)
      if (c > 0) ll += c * std::log(c / n);
  }
  return ll;
}

double configs(const Dataset& d, const std::vector<int>& parents) {
  double q = 1;
  for (int p : parents) q *= d.cardinality(static_cast<std::size_t>(p));
  return q;
}

double k2_oracle(const Dataset& d, int child, const std::vector<int>& parents) {
  const auto fc = count_family(d, child, parents);
  double s = 0;
  for (const auto& [k, v] : fc.table) {
    double n = 0;
    for (double c : v) {
      n += c;
      s += std::lgamma(c + 1);
    }
    s += std::lgamma(fc.r) - std::lgamma(n + fc.r);
  }
  return s;
}

double bdeu_oracle(const Dataset& d, int child, const std::vector<int>& parents, double ess) {
  const auto fc = count_family(d, child, parents);
  const double q = configs(d, parents);
  const double aj = ess / q, ajk = ess / (q * fc.r);
  double s = 0;
  for (const auto& [k, v] : fc.table) {
    double n = 0;
    for (double c : v) {
      n += c;
      s += std::lgamma(ajk + c) - std::lgamma(ajk);
    }
    s += std::lgamma(aj) - std::lgamma(aj + n);
  }
  return s;
}

double mutual_information(const Dataset& d, int a, int b) {
  const double m = static_cast<double>(d.num_rows());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const int x = d.levels(static_cast<std::size_t>(a))[r], y = d.levels(static_cast<std::size_t>(b))[r];
    joint[{x, y}] += 1;
    pa[x] += 1;
    pb[y] += 1;
  }
  double mi = 0;
  for (const auto& [k, c] : joint) mi += c / m * std::log(c * m / (pa[k.first] * pb[k.second]));
  return mi;
}

}  // namespace

TEST_CASE("score kind parsing") {
  CHECK(ScoreKind::parse("BIC") == ScoreKind::bic());
  CHECK(ScoreKind::parse("bde:5").ess == 5.0);
  CHECK_THROWS_AS(ScoreKind::parse("mdl"), InvalidArgument);
}

TEST_CASE("BIC penalty of the empty graph on 4 binary nodes, m = 10000") {
  std::vector<std::vector<int>> cols(4);
  for (int i = 0; i < 10000; ++i)
    for (int v = 0; v < 4; ++v) cols[static_cast<std::size_t>(v)].push_back((i >> v) & 1);
  const auto d = binary(cols);
  const double penalty = score(Dag(4), d, ScoreKind::ll()).total - score(Dag(4), d, ScoreKind::bic()).total;
  CHECK(penalty == doctest::Approx(4 * 0.5 * std::log(10000.0)).epsilon(1e-12));
  CHECK(penalty == doctest::Approx(18.4207).epsilon(1e-5));
}

TEST_CASE("family scores match count oracles") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto truth = random_discrete_net(random_dag(4, std::nullopt, 0.5, seed), seed, 2 + static_cast<int>(seed % 2));
    const auto d = sample(truth, 200, seed + 1);
    const FamilyScorer ll(d, ScoreKind::ll()), bic(d, ScoreKind::bic()), aic(d, ScoreKind::aic()),
        k2(d, ScoreKind::k2()), bde(d, ScoreKind::bde(2.0));
    const std::vector<std::vector<int>> parent_sets{{}, {0}, {0, 2}, {0, 1, 2}};
    for (const auto& ps : parent_sets) {
      const int child = 3;
      const double l = ll_oracle(d, child, ps);
      const double k = (d.cardinality(3) - 1) * configs(d, ps);
      CHECK(ll.family(child, ps) == doctest::Approx(l).epsilon(1e-10));
      CHECK(bic.family(child, ps) == doctest::Approx(l - k / 2 * std::log(200.0)).epsilon(1e-10));
      CHECK(aic.family(child, ps) == doctest::Approx(l - k).epsilon(1e-10));
      CHECK(k2.family(child, ps) == doctest::Approx(k2_oracle(d, child, ps)).epsilon(1e-10));
      CHECK(bde.family(child, ps) == doctest::Approx(bdeu_oracle(d, child, ps, 2.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("K2 of a single binary column with counts (3, 7)") {
  const auto d = binary({counts(7, 3)});
  // 3! 7! / 11! as exact integers.
  const long long num = 6LL * 5040LL, den = 39916800LL;
  const double expected = std::log(static_cast<double>(num) / static_cast<double>(den));
  CHECK(score(Dag(1), d, ScoreKind::k2()).total == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("LL score equals log-likelihood of the unsmoothed fit") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Dag g = random_dag(4, std::nullopt, 0.5, seed);
    const auto d = sample(random_discrete_net(g, seed), 300, seed);
    const Dag h = random_dag(4, std::nullopt, 0.4, seed + 50);
    CHECK(score(h, d, ScoreKind::ll()).total == doctest::Approx(log_likelihood(mle_fit(h, d, 0.0), d)).epsilon(1e-10));
  }
}

TEST_CASE("LL derivative of a root pair equals m times mutual information") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto d = sample(random_discrete_net(Dag(3, {{0, 1}, {1, 2}}), seed), 400, seed);
    const double m = static_cast<double>(d.num_rows());
    CHECK(discrete_derivative({0, 1}, Dag(3), d, ScoreKind::ll()) ==
          doctest::Approx(m * mutual_information(d, 0, 1)).epsilon(1e-9));
    // BIC derivative = LL derivative - (r-1)(r-1)/2 log m for binary roots.
    CHECK(discrete_derivative({0, 1}, Dag(3), d, ScoreKind::bic()) ==
          doctest::Approx(m * mutual_information(d, 0, 1) - 0.5 * std::log(m)).epsilon(1e-9));
  }
}

TEST_CASE("discrete derivative equals full rescore") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = sample(random_discrete_net(random_dag(5, std::nullopt, 0.4, seed), seed), 200, seed);
    const Dag x = random_dag(5, std::nullopt, 0.3, seed + 3);
    for (auto kind : {ScoreKind::bic(), ScoreKind::k2(), ScoreKind::bde()}) {
      for (int p = 0; p < 5; ++p)
        for (int c = 0; c < 5; ++c) {
          if (p == c || x.has_edge(p, c) || x.creates_cycle(p, c)) continue;
          Dag y = x;
          y.add_edge(p, c);
          CHECK(discrete_derivative({p, c}, x, d, kind) ==
                doctest::Approx(score(y, d, kind).total - score(x, d, kind).total).epsilon(1e-9));
        }
    }
    Dag full = x;
    if (!full.edges().empty()) CHECK_THROWS_AS(discrete_derivative(full.edges().front(), x, d, ScoreKind::bic()), InvalidArgument);
  }
}

TEST_CASE("Markov-equivalent structures tie under LL and BIC") {
  const auto d = sample(random_discrete_net(Dag(3, {{0, 1}, {1, 2}}), 4), 500, 5);
  for (auto kind : {ScoreKind::ll(), ScoreKind::bic(), ScoreKind::aic(), ScoreKind::bde()}) {
    const double a = score(Dag(3, {{0, 1}, {1, 2}}), d, kind).total;
    const double b = score(Dag(3, {{1, 0}, {1, 2}}), d, kind).total;
    const double c = score(Dag(3, {{2, 1}, {1, 0}}), d, kind).total;
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
    CHECK(a == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("Bayesian scores reject continuous data") {
  const auto d = Dataset::continuous({VariableSpec::continuous("x")}, {{0.1, 0.5, 0.9}});
  CHECK_THROWS_AS(FamilyScorer(d, ScoreKind::k2()), InvalidArgument);
  CHECK_THROWS_AS(FamilyScorer(d, ScoreKind::bde()), InvalidArgument);
  CHECK_NOTHROW(FamilyScorer(d, ScoreKind::bic()));
}

TEST_CASE("gaussian family score matches OLS oracle") {
  const auto truth = random_gaussian_net(Dag(2, {{0, 1}}), 3);
  const auto d = sample(truth, 300, 4);
  const auto x = d.values(0), y = d.values(1);
  const double m = 300;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    mx += x[i] / m;
    my += y[i] / m;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double beta = sxy / sxx, alpha = my - beta * mx;
  double rss = 0;
  for (std::size_t i = 0; i < 300; ++i) rss += std::pow(y[i] - alpha - beta * x[i], 2);
  const double var = rss / m;
  const double ll = -0.5 * m * (std::log(2 * M_PI * var) + 1);
  const FamilyScorer scorer(d, ScoreKind::ll());
  const std::vector<int> pa{0};
  CHECK(scorer.family(1, pa) == doctest::Approx(ll).epsilon(1e-9));
  CHECK(scorer.free_parameters(1, pa) == 3);
}

TEST_CASE("family cache hits") {
  const auto d = binary({counts(5, 5), counts(3, 7)});
  const FamilyScorer s(d, ScoreKind::bic());
  const std::vector<int> pa{0};
  s.family(1, pa);
  s.family(1, pa);
  CHECK(s.cache_hits() >= 1);
  CHECK(s.cache_size() == 1);
}
