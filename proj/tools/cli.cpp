#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebnet/edge_test.hpp"
#include "ebnet/error.hpp"
#include "ebnet/eval.hpp"
#include "ebnet/io.hpp"
#include "ebnet/parallel.hpp"
#include "ebnet/poset.hpp"
#include "ebnet/random.hpp"
#include "ebnet/search.hpp"

namespace ebnet::cli {

namespace {

namespace fs = std::filesystem;

/// Raised for semantically invalid flag values; maps to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::string data;
  std::string kind;
  std::string score = "bic";
  std::string moves = "ad";
  int max_parents = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = ".";
};

void add_data(CLI::App* cmd, Common& c) {
  cmd->add_option("--data", c.data, "Input CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--kind", c.kind, "Column kind, overriding any #kind line")->check(CLI::IsMember({"discrete", "continuous"}));
}

void add_search(CLI::App* cmd, Common& c) {
  cmd->add_option("--score", c.score, "ll, bic, aic, bde[:ess] or k2")->capture_default_str();
  cmd->add_option("--moves", c.moves, "ad (add/delete) or adr (add/delete/reverse)")
      ->check(CLI::IsMember({"ad", "adr"}))
      ->capture_default_str();
  cmd->add_option("--max-parents", c.max_parents, "Parent limit per node (0: none)")->check(CLI::NonNegativeNumber);
}

void add_run(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0: EBNET_THREADS or all cores)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

ScoreKind score_of(const Common& c) {
  try {
    return ScoreKind::parse(c.score);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

SearchConfig search_of(const Common& c) {
  SearchConfig cfg;
  cfg.kind = score_of(c);
  cfg.moves = c.moves == "adr" ? MoveSet::AddDeleteReverse : MoveSet::AddDelete;
  if (c.max_parents > 0) cfg.max_parents = c.max_parents;
  cfg.seed = c.seed;
  cfg.threads = c.threads > 0 ? c.threads : default_threads();
  return cfg;
}

Dataset load(const Common& c) {
  std::optional<VariableKind> kind;
  if (!c.kind.empty()) kind = parse_kind(c.kind);
  return load_csv(c.data, kind);
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void emit(const fs::path& dir, const std::string& file, const std::string& text, std::vector<std::string>& written) {
  write_text((dir / file).string(), text);
  written.push_back((dir / file).string());
}

void list_written(std::ostream& out, const std::vector<std::string>& written) {
  for (const auto& w : written) out << "wrote " << w << '\n';
}

void print_edges(std::ostream& out, const std::vector<Edge>& edges, const std::vector<std::string>& names) {
  for (const auto& e : edges)
    out << "  " << names[static_cast<std::size_t>(e.parent)] << " -> " << names[static_cast<std::size_t>(e.child)] << '\n';
}

std::optional<Poset> poset_file(const std::string& spec, const std::vector<std::string>& names) {
  if (spec.empty()) return std::nullopt;
  if (spec.rfind("file:", 0) != 0) throw UsageError("--poset here accepts only file:<path>");
  return poset_from_json(read_text(spec.substr(5)), names);
}

struct PosetChoice {
  PosetMethod method = PosetMethod::Confidence;
  std::string path;
};

PosetChoice parse_poset_choice(const std::string& spec) {
  if (spec == "confidence") return {PosetMethod::Confidence, {}};
  if (spec == "agony") return {PosetMethod::Agony, {}};
  if (spec == "suppes") return {PosetMethod::Suppes, {}};
  if (spec.rfind("file:", 0) == 0 && spec.size() > 5) return {PosetMethod::Given, spec.substr(5)};
  throw UsageError("--poset must be confidence, agony, suppes or file:<path>");
}

SuppesTest parse_suppes_test(const std::string& s) {
  if (s == "percentile") return SuppesTest::Percentile;
  if (s == "binomial") return SuppesTest::Binomial;
  return SuppesTest::Wilcoxon;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian network structure learning with bootstrap edge tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ebnet 0.1.0");

  Common c;
  // learn
  auto* learn = app.add_subcommand("learn", "Hill-climbing structure search");
  int restarts = 0;
  std::string learn_poset;
  add_data(learn, c);
  add_search(learn, c);
  learn->add_option("--k", restarts, "Random restarts besides the empty graph")->check(CLI::NonNegativeNumber);
  learn->add_option("--poset", learn_poset, "Restrict edges to file:<poset.json>");
  add_run(learn, c);

  // eb-learn and poset
  int k_p = 100, k_b = 100;
  double alpha = 0.05;
  std::string mhc = "holm", poset_spec = "confidence", suppes_test = "percentile";
  auto add_eb = [&](CLI::App* cmd, bool phase_two) {
    add_data(cmd, c);
    add_search(cmd, c);
    cmd->add_option("--kp", k_p, "Bootstrap replicates for the poset")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--poset", poset_spec, "confidence, agony, suppes or file:<path>")->capture_default_str();
    cmd->add_option("--suppes-test", suppes_test, "percentile, binomial or wilcoxon")
        ->check(CLI::IsMember({"percentile", "binomial", "wilcoxon"}))
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    if (phase_two) {
      cmd->add_option("--kb", k_b, "Bootstrap replicates for the edge tests")->check(CLI::PositiveNumber)->capture_default_str();
      cmd->add_option("--mhc", mhc, "none, holm or bh")->check(CLI::IsMember({"none", "holm", "bh"}))->capture_default_str();
    }
    add_run(cmd, c);
  };
  auto* eb = app.add_subcommand("eb-learn", "Two-phase bootstrap structure learning");
  add_eb(eb, true);
  auto* poset_cmd = app.add_subcommand("poset", "Build the poset only");
  add_eb(poset_cmd, false);

  // landscape
  auto* land = app.add_subcommand("landscape", "Score every DAG (n <= 5)");
  std::string truth_path, land_poset;
  add_data(land, c);
  land->add_option("--score", c.score, "ll, bic, aic, bde[:ess] or k2")->capture_default_str();
  land->add_option("--poset", land_poset, "Restrict to file:<poset.json>");
  land->add_option("--truth", truth_path, "Network JSON of the true model")->check(CLI::ExistingFile);
  land->add_option("--out", c.out, "Output directory")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Synthetic networks and datasets, or the benchmark suite");
  SuiteConfig suite;
  bool run_suite = false;
  std::string mode = "directed";
  synth->add_option("--n", suite.n, "Variables")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--delta", suite.delta, "Edge density")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--m", suite.m, "Samples")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--nu", suite.nu, "Bit-flip noise rate in [0, 0.5)")->check(CLI::Range(0.0, 0.4999999))->capture_default_str();
  synth->add_option("--repeats", suite.repeats, "Repeats")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_flag("--run-suite", run_suite, "Run the method comparison instead of only writing datasets");
  synth->add_option("--methods", suite.methods, "hc-k<N> and eb-<poset>-<mhc> method names")->delimiter(',');
  synth->add_option("--score", c.score, "Score for every method")->capture_default_str();
  synth->add_option("--kp", suite.k_p, "Bootstrap replicates for the poset")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--kb", suite.k_b, "Bootstrap replicates for the edge tests")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--alpha", suite.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--mode", mode, "directed or skeleton metrics")->check(CLI::IsMember({"directed", "skeleton"}));
  add_run(synth, c);

  // eval
  auto* eval = app.add_subcommand("eval", "PPV/TPR of an inferred network against the truth");
  std::string inferred_path;
  eval->add_option("--truth", truth_path, "True network JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--inferred", inferred_path, "Inferred network JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--mode", mode, "directed or skeleton")->check(CLI::IsMember({"directed", "skeleton"}));
  eval->add_option("--out", c.out, "Output directory")->capture_default_str();

  // check-submod
  auto* submod = app.add_subcommand("check-submod", "Submodularity and conditional-KL identity oracle (n <= 4)");
  std::string net_path;
  int trials = 500;
  auto* sub_data = submod->add_option("--data", c.data, "Discrete CSV; families fitted by MLE")->check(CLI::ExistingFile);
  auto* sub_net = submod->add_option("--net", net_path, "Network JSON; families are exact projections")->check(CLI::ExistingFile);
  sub_data->excludes(sub_net);
  submod->add_option("--score", c.score, "Score for the discrete derivatives")->capture_default_str();
  submod->add_option("--trials", trials, "Sampled chains")->check(CLI::NonNegativeNumber)->capture_default_str();
  submod->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  submod->add_option("--out", c.out, "Output directory")->capture_default_str();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << "run with --help for options\n";
    return 2;
  }

  std::vector<std::string> written;
  try {
    if (learn->parsed()) {
      const auto data = load(c);
      const auto names = variable_names(data.variables());
      auto cfg = search_of(c);
      cfg.restarts = restarts;
      cfg.poset = poset_file(learn_poset, names);
      const auto result = hill_climb(data, cfg);
      const auto net = mle_fit(result.dag, data, kDefaultSmoothing);
      const auto dir = out_dir(c);
      emit(dir, "network.json", network_to_json(net), written);
      emit(dir, "network.dot", dag_to_dot(result.dag, names), written);
      out << "score " << cfg.kind.name() << " = " << std::setprecision(10) << result.fitness.total << " ("
          << result.dag.edge_count() << " edges, best start " << result.best_start << " of " << cfg.restarts + 1
          << ")\n";
      print_edges(out, result.dag.edges(), names);
    } else if (eb->parsed() || poset_cmd->parsed()) {
      const auto data = load(c);
      const auto names = variable_names(data.variables());
      EbConfig cfg;
      cfg.k_p = k_p;
      cfg.k_b = k_b;
      cfg.alpha = alpha;
      cfg.correction = parse_correction(mhc);
      const auto choice = parse_poset_choice(poset_spec);
      cfg.poset_method = choice.method;
      if (choice.method == PosetMethod::Given) cfg.given_poset = poset_from_json(read_text(choice.path), names);
      cfg.suppes_test = parse_suppes_test(suppes_test);
      cfg.search = search_of(c);
      cfg.seed = c.seed;
      const auto phase_one = build_poset(data, cfg);
      const auto dir = out_dir(c);
      emit(dir, "poset.json", poset_to_json(phase_one.poset, names), written);
      if (phase_one.consensus) {
        emit(dir, "consensus.json", weighted_to_json(*phase_one.consensus, names), written);
        emit(dir, "consensus.dot", weighted_to_dot(*phase_one.consensus, names), written);
      }
      out << "poset: " << phase_one.poset.edge_count() << " edges";
      if (phase_one.consensus) out << " (consensus " << phase_one.consensus->edge_count() << " edges)";
      out << '\n';
      if (eb->parsed()) {
        const auto result = eb_phase_two(data, phase_one, cfg);
        emit(dir, "network.json", network_to_json(result.net), written);
        emit(dir, "network.dot", dag_to_dot(result.net.dag(), names), written);
        emit(dir, "edge_report.csv", edge_report_to_csv(result.report, names), written);
        emit(dir, "edge_report.json", edge_report_to_json(result.report, names), written);
        const auto accepted = result.report.accepted_edges();
        out << "accepted " << accepted.size() << " of " << result.report.rows.size() << " tested edges ("
            << correction_name(cfg.correction) << ", alpha " << cfg.alpha << ")\n";
        if (result.report.failed_replicates > 0)
          out << "warning: " << result.report.failed_replicates << " replicate fits failed\n";
        print_edges(out, accepted, names);
      } else {
        print_edges(out, phase_one.poset.edges(), names);
      }
    } else if (land->parsed()) {
      const auto data = load(c);
      const auto names = variable_names(data.variables());
      std::optional<Dag> truth;
      if (!truth_path.empty()) {
        const auto net = load_network(truth_path);
        if (variable_names(net.variables()) != names) throw Error("true network variables do not match the dataset");
        truth = net.dag();
      }
      const auto report = landscape(data, score_of(c), poset_file(land_poset, names), truth);
      const auto dir = out_dir(c);
      emit(dir, "landscape.csv", landscape_to_csv(report, names), written);
      emit(dir, "landscape.json", landscape_to_json(report, names), written);
      emit(dir, "landscape.dot", landscape_to_dot(report, names), written);
      out << "scored " << report.dag_count() << " structures; " << report.optima.size() << " optima"
          << (report.unimodal ? " (unimodal)" : "") << '\n';
      if (report.true_model_rank)
        out << "true model rank " << *report.true_model_rank << (report.max_at_true ? ", unique optimum" : "") << '\n';
    } else if (synth->parsed()) {
      suite.kind = score_of(c);
      suite.seed = c.seed;
      suite.threads = c.threads > 0 ? c.threads : default_threads();
      suite.mode = mode == "skeleton" ? MetricMode::Skeleton : MetricMode::Directed;
      const auto dir = out_dir(c);
      if (run_suite) {
        const auto report = synth_suite(suite);
        emit(dir, "suite.csv", suite_to_csv(report), written);
        emit(dir, "suite.json", suite_to_json(report), written);
        out << std::fixed << std::setprecision(3);
        for (const auto& s : report.summary)
          out << std::left << std::setw(22) << s.method << " median PPV " << s.median_ppv << "  median TPR "
              << s.median_tpr << "  mean density " << s.mean_density << '\n';
      } else {
        for (int r = 0; r < suite.repeats; ++r) {
          const auto inst = synth_instance(suite.n, suite.delta, suite.m, suite.nu,
                                           Rng::derive(suite.seed, 10, static_cast<std::uint64_t>(r)));
          const auto stem = "synth_" + std::to_string(r);
          emit(dir, stem + ".csv", [&] {
            std::ostringstream s;
            write_csv(s, inst.data);
            return s.str();
          }(), written);
          emit(dir, stem + "_truth.json", network_to_json(inst.truth), written);
        }
        out << "generated " << suite.repeats << " datasets\n";
      }
    } else if (eval->parsed()) {
      const auto truth = load_network(truth_path);
      const auto inferred = load_network(inferred_path);
      if (variable_names(truth.variables()) != variable_names(inferred.variables()))
        throw Error("networks have different variables");
      const auto m = metrics(truth.dag(), inferred.dag(), mode == "skeleton" ? MetricMode::Skeleton : MetricMode::Directed);
      emit(out_dir(c), "metrics.json", metrics_to_json(m), written);
      out << "tp " << m.tp << " fp " << m.fp << " fn " << m.fn << "  PPV " << m.ppv << "  TPR " << m.tpr << '\n';
    } else if (submod->parsed()) {
      SubmodReport report;
      std::vector<std::string> names;
      if (!net_path.empty()) {
        const auto net = load_network(net_path);
        names = variable_names(net.variables());
        report = check_submodularity_exact(net, trials, c.seed);
      } else if (!c.data.empty()) {
        const auto data = load(c);
        names = variable_names(data.variables());
        report = check_submodularity(data, score_of(c), trials, c.seed);
      } else {
        throw UsageError("check-submod needs --data or --net");
      }
      emit(out_dir(c), "submod.json", submod_to_json(report, names), written);
      out << report.violations << " of " << report.trials.size() << " chains violate the diminishing-gain inequality";
      if (report.violations > 0) out << " (median excess " << report.median_violation << ")";
      out << "\nmax Lemma 1 residual " << report.max_lemma1_residual << '\n';
    }
    list_written(out, written);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    nlohmann::json j{{"error", "format"}, {"where", e.where()}, {"message", e.what()}};
    err << j.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json j{{"error", "runtime"}, {"message", e.what()}};
    err << j.dump() << '\n';
    return 1;
  }
}

}  // namespace ebnet::cli
