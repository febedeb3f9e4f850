// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ebnet/bayes_net.hpp"
#include "ebnet/edge_test.hpp"
#include "ebnet/eval.hpp"
#include "ebnet/parallel.hpp"
#include "ebnet/poset.hpp"
#include "ebnet/random.hpp"
#include "ebnet/scoring.hpp"
#include "ebnet/search.hpp"
#include "ebnet/stats.hpp"

using namespace ebnet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Random n = 4 binary net with at most two parents per node, as used by the
// landscape criteria.
struct LandscapeRun {
  Dag truth;
  Dataset data;
};

LandscapeRun landscape_run(std::uint64_t s) {
  const Dag d = random_dag(4, std::nullopt, 0.5, Rng::derive(s, 100), 2);
  const auto net = random_discrete_net(d, Rng::derive(s, 101));
  return {d, sample(net, 10000, Rng::derive(s, 102))};
}

Outcome criterion1() {
  const std::vector<std::size_t> expected{1, 3, 25, 543, 29281};
  std::string got;
  bool ok = true;
  for (int n = 1; n <= 5; ++n) {
    const auto k = enumerate_dags(n).size();
    ok = ok && k == expected[static_cast<std::size_t>(n - 1)];
    got += (n > 1 ? "," : "") + std::to_string(k);
  }
  return {ok, "counts " + got};
}

struct LandscapeTally {
  int multimodal = 0;
  double gap = 0.0;
  int at_true = 0;
};

LandscapeTally landscape_tally() {
  std::vector<LandscapeTally> per(100);
  parallel_for(100, default_threads(), [&](std::size_t s) {
    const auto run = landscape_run(s);
    const auto free = landscape(run.data, ScoreKind::bic(), std::nullopt, run.truth);
    const auto constrained = landscape(run.data, ScoreKind::bic(), transitive_closure(run.truth), run.truth);
    per[s] = {free.optima.size() >= 2 ? 1 : 0, max_equivalence_gap(free), constrained.max_at_true ? 1 : 0};
  });
  LandscapeTally t;
  for (const auto& p : per) {
    t.multimodal += p.multimodal;
    t.gap = std::max(t.gap, p.gap);
    t.at_true += p.at_true;
  }
  return t;
}

Outcome criterion4() {
  int exact_violations = 0, exact_trials = 0, mle_violations = 0, mle_trials = 0;
  std::vector<double> magnitudes;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Dag d = random_dag(4, std::nullopt, 0.5, Rng::derive(s, 200));
    const auto net = random_discrete_net(d, Rng::derive(s, 201));
    const auto exact = check_submodularity_exact(net, 100, Rng::derive(s, 202));
    exact_violations += exact.violations;
    exact_trials += static_cast<int>(exact.trials.size());
    const auto mle = check_submodularity(sample(net, 10000, Rng::derive(s, 203)), ScoreKind::bic(), 100, Rng::derive(s, 204));
    mle_violations += mle.violations;
    mle_trials += static_cast<int>(mle.trials.size());
    for (const auto& t : mle.trials)
      if (t.gain_y - t.gain_x > kSubmodTolerance) magnitudes.push_back(t.gain_y - t.gain_x);
  }
  const double fraction = static_cast<double>(mle_violations) / mle_trials;
  const double med = magnitudes.empty() ? 0.0 : median(magnitudes);
  const bool ok = exact_violations == 0 && fraction <= 0.05 && med <= 1e-3;
  return {ok, fmt("exact violations %d/%d; mle violations %d/%d (%.3f), median magnitude %.2e", exact_violations,
                  exact_trials, mle_violations, mle_trials, fraction, med)};
}

Outcome criterion5() {
  Rng rng(5);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int rx = 2 + static_cast<int>(rng.below(2)), ry = 2 + static_cast<int>(rng.below(2)),
              rz = 2 + static_cast<int>(rng.below(2));
    const auto p = rng.dirichlet(static_cast<std::size_t>(rx * ry * rz), 1.0);
    std::vector<double> q(static_cast<std::size_t>(rx * ry));
    for (int y = 0; y < ry; ++y) {
      const auto row = rng.dirichlet(static_cast<std::size_t>(rx), 1.0);
      std::copy(row.begin(), row.end(), q.begin() + y * rx);
    }
    worst = std::max(worst, lemma1_residual(p, rx, ry, rz, q));
  }
  return {worst <= 1e-9, fmt("max residual %.2e over 100 triples", worst)};
}

Outcome criterion6() {
  constexpr int kSeeds = 200;
  std::vector<int> holm_any(kSeeds, 0);
  std::vector<double> bh_fraction(kSeeds, 0.0);
  parallel_for(kSeeds, default_threads(), [&](std::size_t s) {
    const auto inst = synth_instance(8, 0.2, 500, 0.0, Rng::derive(s, 300));
    const auto data = permute_rows(inst.data, Rng::derive(s, 301));
    EbConfig cfg;
    cfg.seed = s;
    const auto phase_one = build_poset(data, cfg);
    const auto ens = fit_ensembles(data, phase_one.poset, cfg.k_b, cfg.search, Rng::derive(cfg.seed, 2, 0));
    const auto holm = test_edges(ens.data, ens.null, phase_one.poset, 0.05, Correction::Holm);
    const auto bh = test_edges(ens.data, ens.null, phase_one.poset, 0.05, Correction::BenjaminiHochberg);
    holm_any[s] = !holm.accepted_edges().empty();
    if (phase_one.poset.edge_count() > 0)
      bh_fraction[s] = static_cast<double>(bh.accepted_edges().size()) / static_cast<double>(phase_one.poset.edge_count());
  });
  int any = 0;
  double mean = 0;
  for (int s = 0; s < kSeeds; ++s) {
    any += holm_any[static_cast<std::size_t>(s)];
    mean += bh_fraction[static_cast<std::size_t>(s)] / kSeeds;
  }
  const double rate = static_cast<double>(any) / kSeeds;
  return {rate <= 0.10 && mean <= 0.07,
          fmt("holm any false acceptance %d/%d (%.3f); bh mean false-acceptance fraction %.3f", any, kSeeds, rate, mean)};
}

SuiteReport figure3_suite() {
  SuiteConfig cfg;
  cfg.n = 10;
  cfg.delta = 0.2;
  cfg.m = 500;
  cfg.nu = 0.1;
  cfg.repeats = 100;
  cfg.methods = {"hc-k0", "hc-k200", "eb-confidence-holm", "eb-agony-holm"};
  cfg.seed = 7;
  cfg.threads = default_threads();
  return synth_suite(cfg);
}

Outcome criterion7(const SuiteReport& rep) {
  // The first 50 repeats form the comparison; the rest only feed criterion 8.
  auto stats_of = [&](const std::string& method) {
    std::vector<double> ppv, tpr;
    for (const auto& r : rep.rows)
      if (r.method == method && r.repeat < 50) {
        ppv.push_back(r.metrics.ppv);
        tpr.push_back(r.metrics.tpr);
      }
    return std::pair{median(ppv), median(tpr)};
  };
  const auto [eb_ppv, eb_tpr] = stats_of("eb-confidence-holm");
  const auto [k0_ppv, k0_tpr] = stats_of("hc-k0");
  const auto [k200_ppv, k200_tpr] = stats_of("hc-k200");
  const bool ok = eb_tpr >= k0_tpr && eb_tpr >= k200_tpr && std::fabs(eb_ppv - k0_ppv) <= 0.1 &&
                  std::fabs(eb_ppv - k200_ppv) <= 0.1;
  return {ok, fmt("median TPR eb %.3f, hc-k0 %.3f, hc-k200 %.3f; median PPV eb %.3f, hc-k0 %.3f, hc-k200 %.3f", eb_tpr,
                  k0_tpr, k200_tpr, eb_ppv, k0_ppv, k200_ppv)};
}

Outcome criterion8(const SuiteReport& rep) {
  std::size_t subset = 0, missing = 0, total = 0;
  for (const auto& p : rep.posets) {
    subset += p.missing == 0;
    missing += p.missing;
    total += p.confidence_edges;
  }
  const double fraction = total ? static_cast<double>(missing) / static_cast<double>(total) : 0.0;
  return {subset >= 95 && fraction <= 0.02 && rep.posets.size() == 100,
          fmt("confidence poset within agony poset in %zu/%zu graphs; missing edges %zu/%zu (%.3f)", subset,
              rep.posets.size(), missing, total, fraction)};
}

long brute_agony(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  long best = std::numeric_limits<long>::max();
  for (;;) {
    best = std::min(best, agony_of(g, r));
    int i = 0;
    while (i < n && ++r[static_cast<std::size_t>(i)] == n) r[static_cast<std::size_t>(i++)] = 0;
    if (i == n) return best;
  }
}

Outcome criterion9() {
  int exact = 0, dags_zero = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(Rng::derive(s, 400));
    const int n = 3 + static_cast<int>(s % 4);
    WeightedDigraph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng.bernoulli(0.35)) g.set(u, v, 1 + static_cast<long>(rng.below(100)));
    exact += agony_rank(g).agony == brute_agony(g);

    const Dag d = random_dag(n, std::nullopt, 0.5, Rng::derive(s, 401));
    WeightedDigraph h(n);
    for (const auto& e : d.edges()) h.set(e.parent, e.child, 1 + static_cast<long>(rng.below(100)));
    dags_zero += agony_rank(h).agony == 0;
  }
  return {exact == 20 && dags_zero == 20,
          fmt("agony equals exhaustive minimum on %d/20 digraphs; DAGs with agony 0: %d/20", exact, dags_zero)};
}

Outcome criterion10() {
  int checks = 0, failures = 0;
  std::string failed;
  auto expect = [&](bool ok, const char* what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (failed.find(what) == std::string::npos) failed += std::string(failed.empty() ? "" : ", ") + what;
    }
  };
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Dag g = random_dag(5, std::nullopt, 0.4, Rng::derive(s, 500));
    const auto net = random_discrete_net(g, Rng::derive(s, 501));
    const auto data = sample(net, 400, Rng::derive(s, 502));

    // Decomposability: total = sum of family scores, and a one-edge change
    // moves only the child's family.
    const Dag x = random_dag(5, std::nullopt, 0.3, Rng::derive(s, 503));
    for (auto kind : {ScoreKind::bic(), ScoreKind::bde(), ScoreKind::k2()}) {
      const auto f = score(x, data, kind);
      double sum = 0;
      for (double v : f.per_node) sum += v;
      expect(std::fabs(sum - f.total) < 1e-9, "decomposability");
      for (int p = 0; p < 5; ++p)
        for (int c = 0; c < 5; ++c) {
          if (p == c || x.has_edge(p, c) || x.creates_cycle(p, c)) continue;
          Dag y = x;
          y.add_edge(p, c);
          const auto fy = score(y, data, kind);
          for (int v = 0; v < 5; ++v)
            if (v != c) expect(fy.per_node[static_cast<std::size_t>(v)] == f.per_node[static_cast<std::size_t>(v)], "decomposability");
          expect(std::fabs(discrete_derivative({p, c}, x, data, kind) - (fy.total - f.total)) < 1e-9, "decomposability");
          // Maximised LL never drops when an edge is added.
          expect(score(y, data, ScoreKind::ll()).total >= score(x, data, ScoreKind::ll()).total - 1e-9, "monotone LL");
        }
    }

    // Pipeline outputs are acyclic and reproducible.
    EbConfig cfg;
    cfg.k_p = 20;
    cfg.k_b = 20;
    cfg.seed = s;
    cfg.poset_method = s % 3 == 0 ? PosetMethod::Confidence : s % 3 == 1 ? PosetMethod::Agony : PosetMethod::Suppes;
    const auto a = eb_learn(data, cfg);
    expect(is_acyclic(5, a.poset.edges()), "acyclic outputs");
    expect(is_acyclic(5, a.net.dag().edges()), "acyclic outputs");
    expect(a.poset.contains(a.net.dag()), "acyclic outputs");
    expect(a.report.rows.size() == a.poset.edge_count(), "hypothesis count");
    cfg.search.threads = 3;
    const auto b = eb_learn(data, cfg);
    expect(a.report == b.report && a.net == b.net, "seed determinism");

    SearchConfig sc;
    sc.restarts = 5;
    sc.seed = s;
    const auto h1 = hill_climb(data, sc);
    sc.threads = 4;
    const auto h2 = hill_climb(data, sc);
    expect(h1.dag == h2.dag && is_acyclic(5, h1.dag.edges()), "seed determinism");

    // Holm rejections are a subset of BH rejections on identical inputs.
    const auto ens = fit_ensembles(data, a.poset, 20, cfg.search, s);
    const auto holm = test_edges(ens.data, ens.null, a.poset, 0.05, Correction::Holm);
    const auto bh = test_edges(ens.data, ens.null, a.poset, 0.05, Correction::BenjaminiHochberg);
    for (std::size_t i = 0; i < holm.rows.size(); ++i)
      expect(!holm.rows[i].rejected || bh.rows[i].rejected, "MHC ordering");
  }
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> p(10);
    for (auto& v : p) v = std::pow(rng.uniform(), 4);
    const auto h = stats::holm_adjust(p), b = stats::bh_adjust(p);
    for (std::size_t i = 0; i < p.size(); ++i) expect(b[i] <= h[i], "MHC ordering");
  }
  return {failures == 0, failures == 0 ? fmt("%d property checks green", checks)
                                       : fmt("%d/%d property checks failed: %s", failures, checks, failed.c_str())};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::function<Outcome()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto o = run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  };

  report(1, criterion1);
  LandscapeTally tally;
  report(2, [&] {
    tally = landscape_tally();
    return Outcome{tally.multimodal >= 95 && tally.gap <= 1e-9,
                   fmt("%d/100 landscapes with >= 2 optima; max equivalence-class score gap %.2e", tally.multimodal, tally.gap)};
  });
  report(3, [&] {
    return Outcome{tally.at_true >= 93, fmt("%d/100 unimodal with maximum at the true model under its closure poset", tally.at_true)};
  });
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  SuiteReport suite;
  report(7, [&] {
    suite = figure3_suite();
    return criterion7(suite);
  });
  report(8, [&] { return criterion8(suite); });
  report(9, criterion9);
  report(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
