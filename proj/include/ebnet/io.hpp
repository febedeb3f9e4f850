#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ebnet/bayes_net.hpp"
#include "ebnet/dataset.hpp"
#include "ebnet/edge_test.hpp"
#include "ebnet/eval.hpp"
#include "ebnet/graph.hpp"

namespace ebnet {

// CSV datasets. The first non-comment line holds the variable names. An
// optional leading line "#kind: discrete" or "#kind: continuous" declares the
// column kind; an explicit `kind` argument overrides it. Without either the
// data is read as discrete. Discrete levels are the distinct observed strings,
// sorted numerically when every one parses as a number and lexicographically
// otherwise. Errors name the 1-based data row and the column.
Dataset parse_csv(std::istream& in, std::optional<VariableKind> kind = std::nullopt);
Dataset load_csv(const std::string& path, std::optional<VariableKind> kind = std::nullopt);
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::string& path, const Dataset& data);

VariableKind parse_kind(const std::string& text);

// Network JSON:
//   {"variables": [{"name": "a", "kind": "discrete", "levels": ["0", "1"]}, ...],
//    "edges": [["a", "b"], ...],
//    "params": {"a": {"cpt": [[0.3, 0.7]]},
//               "b": {"cpt": [[...], [...]]},
//               "c": {"intercept": 0.0, "coefficients": [...], "variance": 1.0}}}
// CPT rows follow parent configurations with parents in variable order and the
// first parent as the most significant digit. Schema errors carry a JSON
// pointer.
std::string network_to_json(const BayesNet& net);
BayesNet network_from_json(const std::string& text);
void save_network(const std::string& path, const BayesNet& net);
BayesNet load_network(const std::string& path);

/// Graphviz digraph of `dag` with variable names as node labels.
std::string dag_to_dot(const Dag& dag, const std::vector<std::string>& names);
std::string weighted_to_dot(const WeightedDigraph& g, const std::vector<std::string>& names);

// Graph JSON shared by posets and weighted digraphs:
//   {"variables": ["a", "b"], "edges": [{"parent": "a", "child": "b", "weight": 3}]}
// Weights are omitted for posets.
std::string poset_to_json(const Poset& poset, const std::vector<std::string>& names);
std::string weighted_to_json(const WeightedDigraph& g, const std::vector<std::string>& names);
/// Edge endpoints may be names or indices. When `names` is given the file's
/// variable list must match it.
Poset poset_from_json(const std::string& text, const std::optional<std::vector<std::string>>& names = std::nullopt);
WeightedDigraph weighted_from_json(const std::string& text,
                                   const std::optional<std::vector<std::string>>& names = std::nullopt);

/// parent,child,present_data,present_null,p_raw,p_adjusted,rejected
std::string edge_report_to_csv(const EdgeTestReport& report, const std::vector<std::string>& names);
std::string edge_report_to_json(const EdgeTestReport& report, const std::vector<std::string>& names);

std::string landscape_to_csv(const LandscapeReport& report, const std::vector<std::string>& names);
std::string landscape_to_json(const LandscapeReport& report, const std::vector<std::string>& names);
/// One node per structure labelled with its edges and fitness; arrows follow
/// steepest-ascent steps; optima are drawn as double circles.
std::string landscape_to_dot(const LandscapeReport& report, const std::vector<std::string>& names);

std::string metrics_to_json(const EvalMetrics& m);
std::string submod_to_json(const SubmodReport& report, const std::vector<std::string>& names);
std::string suite_to_csv(const SuiteReport& report);
std::string suite_to_json(const SuiteReport& report);

std::vector<std::string> variable_names(const std::vector<VariableSpec>& vars);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace ebnet
