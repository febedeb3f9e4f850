#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebnet/bayes_net.hpp"
#include "ebnet/dataset.hpp"
#include "ebnet/edge_test.hpp"
#include "ebnet/error.hpp"
#include "ebnet/eval.hpp"
#include "ebnet/graph.hpp"
#include "ebnet/io.hpp"
#include "ebnet/poset.hpp"
#include "ebnet/scoring.hpp"
#include "ebnet/search.hpp"

namespace py = pybind11;
using namespace ebnet;

namespace {

using EdgeList = std::vector<std::pair<int, int>>;
using WeightMap = std::map<std::pair<int, int>, long>;

std::vector<Edge> to_edges(const EdgeList& list) {
  std::vector<Edge> out;
  for (const auto& [p, c] : list) out.push_back({p, c});
  return out;
}

EdgeList from_edges(const std::vector<Edge>& edges) {
  EdgeList out;
  for (const auto& e : edges) out.emplace_back(e.parent, e.child);
  return out;
}

WeightMap from_weighted(const WeightedDigraph& g) {
  WeightMap out;
  for (const auto& [e, w] : g.weights()) out[{e.parent, e.child}] = w;
  return out;
}

WeightedDigraph to_weighted(int n, const WeightMap& weights) {
  WeightedDigraph g(n);
  for (const auto& [e, w] : weights) g.set(e.first, e.second, w);
  return g;
}

std::optional<Poset> optional_poset(int n, const std::optional<EdgeList>& edges) {
  if (!edges) return std::nullopt;
  return Poset(n, to_edges(*edges));
}

MoveSet parse_moves(const std::string& s) {
  if (s == "ad") return MoveSet::AddDelete;
  if (s == "adr") return MoveSet::AddDeleteReverse;
  throw InvalidArgument("moves must be 'ad' or 'adr'");
}

MetricMode parse_mode(const std::string& s) {
  if (s == "directed") return MetricMode::Directed;
  if (s == "skeleton") return MetricMode::Skeleton;
  throw InvalidArgument("mode must be 'directed' or 'skeleton'");
}

PosetMethod parse_poset_method(const std::string& s) {
  if (s == "confidence") return PosetMethod::Confidence;
  if (s == "agony") return PosetMethod::Agony;
  if (s == "suppes") return PosetMethod::Suppes;
  throw InvalidArgument("poset must be 'confidence', 'agony', 'suppes' or an edge list");
}

py::dict metrics_dict(const EvalMetrics& m) {
  py::dict d;
  d["tp"] = m.tp;
  d["fp"] = m.fp;
  d["fn"] = m.fn;
  d["ppv"] = m.ppv;
  d["tpr"] = m.tpr;
  return d;
}

py::list report_rows(const EdgeTestReport& rep) {
  py::list rows;
  for (const auto& r : rep.rows) {
    py::dict d;
    d["edge"] = std::pair{r.edge.parent, r.edge.child};
    d["present_data"] = r.present_data;
    d["present_null"] = r.present_null;
    d["p_raw"] = r.p_raw;
    d["p_adjusted"] = r.p_adjusted;
    d["rejected"] = r.rejected;
    d["accepted"] = r.accepted;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_ebnet, m) {
  m.doc() = "Bayesian network structure learning with bootstrap edge tests";

  // Translators run newest first, so derived classes are registered last.
  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def_static(
          "discrete",
          [](const std::vector<std::string>& names, std::vector<std::vector<int>> columns,
             std::optional<std::vector<int>> cardinalities) {
            std::vector<VariableSpec> vars;
            for (std::size_t i = 0; i < names.size(); ++i) {
              int r = 2;
              if (cardinalities) r = cardinalities->at(i);
              else if (i < columns.size() && !columns[i].empty())
                r = std::max(2, 1 + *std::max_element(columns[i].begin(), columns[i].end()));
              vars.push_back(VariableSpec::discrete(names[i], r));
            }
            return Dataset::discrete(std::move(vars), std::move(columns));
          },
          py::arg("names"), py::arg("columns"), py::arg("cardinalities") = py::none(),
          "Discrete dataset from integer level codes, one list per column.")
      .def_static(
          "continuous",
          [](const std::vector<std::string>& names, std::vector<std::vector<double>> columns) {
            std::vector<VariableSpec> vars;
            for (const auto& n : names) vars.push_back(VariableSpec::continuous(n));
            return Dataset::continuous(std::move(vars), std::move(columns));
          },
          py::arg("names"), py::arg("columns"))
      .def_property_readonly("num_variables", &Dataset::num_variables)
      .def_property_readonly("num_rows", &Dataset::num_rows)
      .def_property_readonly("is_discrete", &Dataset::is_discrete)
      .def_property_readonly("names", [](const Dataset& d) { return variable_names(d.variables()); })
      .def("cardinality", &Dataset::cardinality)
      .def("levels", [](const Dataset& d, std::size_t v) {
        const auto s = d.levels(v);
        return std::vector<int>(s.begin(), s.end());
      })
      .def("values", [](const Dataset& d, std::size_t v) {
        const auto s = d.values(v);
        return std::vector<double>(s.begin(), s.end());
      })
      .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; })
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset n=" + std::to_string(d.num_variables()) + " m=" + std::to_string(d.num_rows()) + ">";
      });

  py::class_<Dag>(m, "Dag")
      .def(py::init([](int n, const EdgeList& edges) { return Dag(n, to_edges(edges)); }), py::arg("n"),
           py::arg("edges") = EdgeList{})
      .def_property_readonly("n", &Dag::size)
      .def("edges", [](const Dag& g) { return from_edges(g.edges()); })
      .def("has_edge", py::overload_cast<int, int>(&Dag::has_edge, py::const_))
      .def("parents", &Dag::parents)
      .def("__len__", &Dag::edge_count)
      .def("__eq__", [](const Dag& a, const Dag& b) { return a == b; })
      .def("__repr__", [](const Dag& g) { return "<Dag n=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edge_count()) + ">"; });

  py::class_<BayesNet>(m, "BayesNet")
      .def_static("from_json", &network_from_json)
      .def("to_json", &network_to_json)
      .def_property_readonly("dag", &BayesNet::dag)
      .def_property_readonly("names", [](const BayesNet& b) { return variable_names(b.variables()); })
      .def("cpt", [](const BayesNet& b, std::size_t v) { return b.cpt(v).table; })
      .def("__eq__", [](const BayesNet& a, const BayesNet& b) { return a == b; });

  m.def("load_csv", [](const std::string& path, std::optional<std::string> kind) {
    std::optional<VariableKind> k;
    if (kind) k = parse_kind(*kind);
    return load_csv(path, k);
  }, py::arg("path"), py::arg("kind") = py::none());
  m.def("save_csv", &save_csv, py::arg("path"), py::arg("data"));
  m.def("load_network", &load_network);
  m.def("save_network", &save_network, py::arg("path"), py::arg("net"));
  m.def("dag_to_dot", [](const Dag& g, std::optional<std::vector<std::string>> names) {
    if (!names) {
      names.emplace();
      for (int i = 0; i < g.size(); ++i) names->push_back("x" + std::to_string(i + 1));
    }
    return dag_to_dot(g, *names);
  }, py::arg("dag"), py::arg("names") = py::none());

  m.def("mle_fit", &mle_fit, py::arg("dag"), py::arg("data"), py::arg("smoothing") = kDefaultSmoothing);
  m.def("log_likelihood", &log_likelihood, py::arg("net"), py::arg("data"));
  m.def("sample", &sample, py::arg("net"), py::arg("m"), py::arg("seed"));
  m.def("random_discrete_net", &random_discrete_net, py::arg("dag"), py::arg("seed"), py::arg("cardinality") = 2,
        py::arg("alpha") = 1.0);
  m.def("random_dag", [](int n, double density, std::uint64_t seed, std::optional<int> max_parents) {
    return random_dag(n, std::nullopt, density, seed, max_parents);
  }, py::arg("n"), py::arg("density"), py::arg("seed"), py::arg("max_parents") = py::none());

  m.def("score", [](const Dag& g, const Dataset& d, const std::string& kind) {
    const auto f = score(g, d, ScoreKind::parse(kind));
    return std::pair{f.total, f.per_node};
  }, py::arg("dag"), py::arg("data"), py::arg("kind") = "bic", "Returns (total, per-node scores).");
  m.def("discrete_derivative", [](std::pair<int, int> e, const Dag& x, const Dataset& d, const std::string& kind) {
    return discrete_derivative({e.first, e.second}, x, d, ScoreKind::parse(kind));
  }, py::arg("edge"), py::arg("dag"), py::arg("data"), py::arg("kind") = "bic");

  m.def("hill_climb", [](const Dataset& d, const std::string& kind, int restarts, std::optional<EdgeList> poset,
                         std::optional<int> max_parents, const std::string& moves, std::uint64_t seed, int threads) {
    SearchConfig cfg;
    cfg.kind = ScoreKind::parse(kind);
    cfg.restarts = restarts;
    cfg.poset = optional_poset(static_cast<int>(d.num_variables()), poset);
    cfg.max_parents = max_parents;
    cfg.moves = parse_moves(moves);
    cfg.seed = seed;
    cfg.threads = threads;
    py::gil_scoped_release release;
    const auto r = hill_climb(d, cfg);
    return std::pair{r.dag, r.fitness.total};
  }, py::arg("data"), py::arg("kind") = "bic", py::arg("restarts") = 0, py::arg("poset") = py::none(),
     py::arg("max_parents") = py::none(), py::arg("moves") = "ad", py::arg("seed") = 0, py::arg("threads") = 1,
     "Returns (dag, fitness).");

  m.def("consensus", [](const Dataset& d, int k_p, const std::string& kind, std::uint64_t seed, int threads) {
    SearchConfig cfg;
    cfg.kind = ScoreKind::parse(kind);
    cfg.seed = seed;
    cfg.threads = threads;
    py::gil_scoped_release release;
    return from_weighted(consensus(d, k_p, cfg));
  }, py::arg("data"), py::arg("k_p") = 100, py::arg("kind") = "bic", py::arg("seed") = 0, py::arg("threads") = 1,
     "Edge weights {(parent, child): count}.");
  m.def("break_loops_confidence", [](int n, const WeightMap& w) {
    return from_edges(break_loops_confidence(to_weighted(n, w)).edges());
  });
  m.def("break_loops_agony", [](int n, const WeightMap& w) {
    return from_edges(break_loops_agony(to_weighted(n, w)).edges());
  });
  m.def("agony_rank", [](int n, const WeightMap& w) {
    const auto r = agony_rank(to_weighted(n, w));
    return std::pair{r.rank, r.agony};
  }, "Returns (ranks, agony).");
  m.def("suppes_poset", [](const Dataset& d, int k_p, double alpha, std::uint64_t seed, const std::string& test) {
    SuppesTest t = SuppesTest::Percentile;
    if (test == "binomial") t = SuppesTest::Binomial;
    else if (test == "wilcoxon") t = SuppesTest::Wilcoxon;
    else if (test != "percentile") throw InvalidArgument("test must be percentile, binomial or wilcoxon");
    return from_edges(suppes_poset(d, k_p, alpha, seed, t).edges());
  }, py::arg("data"), py::arg("k_p") = 100, py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("test") = "percentile");

  m.def("eb_learn", [](const Dataset& d, int k_p, int k_b, double alpha, const std::string& correction,
                       py::object poset, const std::string& kind, std::uint64_t seed, int threads) {
    EbConfig cfg;
    cfg.k_p = k_p;
    cfg.k_b = k_b;
    cfg.alpha = alpha;
    cfg.correction = parse_correction(correction);
    if (py::isinstance<py::str>(poset)) {
      cfg.poset_method = parse_poset_method(poset.cast<std::string>());
    } else {
      cfg.poset_method = PosetMethod::Given;
      cfg.given_poset = Poset(static_cast<int>(d.num_variables()), to_edges(poset.cast<EdgeList>()));
    }
    cfg.search.kind = ScoreKind::parse(kind);
    cfg.search.threads = threads;
    cfg.seed = seed;
    EbResult r;
    {
      py::gil_scoped_release release;
      r = eb_learn(d, cfg);
    }
    py::dict out;
    out["net"] = r.net;
    out["poset"] = from_edges(r.poset.edges());
    out["accepted"] = from_edges(r.report.accepted_edges());
    out["rows"] = report_rows(r.report);
    out["failed_replicates"] = r.report.failed_replicates;
    if (r.consensus) out["consensus"] = from_weighted(*r.consensus);
    return out;
  }, py::arg("data"), py::arg("k_p") = 100, py::arg("k_b") = 100, py::arg("alpha") = 0.05,
     py::arg("correction") = "holm", py::arg("poset") = "confidence", py::arg("kind") = "bic", py::arg("seed") = 0,
     py::arg("threads") = 1,
     "Two-phase learning. `poset` is confidence, agony, suppes or an explicit edge list.");

  m.def("enumerate_dags", &enumerate_dags);
  m.def("count_dags", &count_dags);
  m.def("markov_equivalent", &markov_equivalent);
  m.def("landscape", [](const Dataset& d, const std::string& kind, std::optional<EdgeList> poset, std::optional<Dag> truth) {
    LandscapeReport r;
    {
      py::gil_scoped_release release;
      r = landscape(d, ScoreKind::parse(kind), optional_poset(static_cast<int>(d.num_variables()), poset), truth);
    }
    py::dict out;
    out["dag_count"] = r.dag_count();
    std::vector<Dag> optima;
    std::vector<double> fitness;
    for (auto i : r.optima) {
      optima.push_back(r.dags[i]);
      fitness.push_back(r.fitness[i]);
    }
    out["optima"] = optima;
    out["optima_fitness"] = fitness;
    out["basin_sizes"] = r.basin_sizes;
    out["unimodal"] = r.unimodal;
    out["max_at_true"] = r.max_at_true;
    if (r.true_model_rank) out["true_model_rank"] = *r.true_model_rank;
    out["max_equivalence_gap"] = max_equivalence_gap(r);
    return out;
  }, py::arg("data"), py::arg("kind") = "bic", py::arg("poset") = py::none(), py::arg("truth") = py::none());

  m.def("exact_joint", &exact_joint);
  m.def("kl_divergence", py::overload_cast<const BayesNet&, const BayesNet&>(&kl_divergence));
  m.def("metrics", [](const Dag& truth, const Dag& inferred, const std::string& mode) {
    return metrics_dict(metrics(truth, inferred, parse_mode(mode)));
  }, py::arg("truth"), py::arg("inferred"), py::arg("mode") = "directed");
  m.def("synth_instance", [](int n, double delta, std::size_t m_rows, double nu, std::uint64_t seed) {
    auto inst = synth_instance(n, delta, m_rows, nu, seed);
    return std::pair{inst.truth, inst.data};
  }, py::arg("n"), py::arg("delta"), py::arg("m"), py::arg("nu"), py::arg("seed"), "Returns (truth, data).");
  m.def("check_submodularity", [](const Dataset& d, const std::string& kind, int trials, std::uint64_t seed) {
    const auto r = check_submodularity(d, ScoreKind::parse(kind), trials, seed);
    py::dict out;
    out["violations"] = r.violations;
    out["violation_fraction"] = r.violation_fraction;
    out["median_violation"] = r.median_violation;
    out["max_lemma1_residual"] = r.max_lemma1_residual;
    return out;
  }, py::arg("data"), py::arg("kind") = "bic", py::arg("trials") = 100, py::arg("seed") = 0);
}
