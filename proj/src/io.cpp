#include "ebnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ebnet/error.hpp"

namespace ebnet {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!trim(field).empty()) throw FormatError("row " + std::to_string(row), "stray quote inside a field");
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw FormatError("row " + std::to_string(row), "unterminated quoted field");
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string where(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

}  // namespace

VariableKind parse_kind(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "discrete") return VariableKind::Discrete;
  if (t == "continuous") return VariableKind::Continuous;
  throw InvalidArgument("unknown variable kind '" + text + "' (expected discrete or continuous)");
}

Dataset parse_csv(std::istream& in, std::optional<VariableKind> kind) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  std::size_t at = 0;
  std::optional<VariableKind> declared;
  for (; at < lines.size() && !lines[at].empty() && lines[at][0] == '#'; ++at) {
    const auto body = trim(lines[at].substr(1));
    if (lower(body).rfind("kind:", 0) == 0) {
      try {
        declared = parse_kind(body.substr(5));
      } catch (const InvalidArgument& e) {
        throw FormatError("line " + std::to_string(at + 1), e.what());
      }
    }
  }
  if (at >= lines.size()) throw FormatError("header", "missing header row");
  const auto names = split_record(lines[at], 0);
  for (std::size_t c = 0; c < names.size(); ++c)
    if (names[c].empty()) throw FormatError("header, column " + std::to_string(c + 1), "empty variable name");
  {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) throw FormatError("header", "duplicate variable name '" + n + "'");
  }
  const auto n = names.size();
  std::vector<std::vector<std::string>> cells(n);
  std::size_t row = 0;
  for (std::size_t i = at + 1; i < lines.size(); ++i) {
    ++row;
    const auto fields = split_record(lines[i], row);
    if (fields.size() != n)
      throw FormatError("row " + std::to_string(row),
                        "expected " + std::to_string(n) + " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < n; ++c) {
      if (fields[c].empty()) throw FormatError(where(row, names[c]), "empty cell");
      cells[c].push_back(fields[c]);
    }
  }
  if (row == 0) throw FormatError("data", "no data rows");

  const VariableKind k = kind ? *kind : declared.value_or(VariableKind::Discrete);
  if (k == VariableKind::Continuous) {
    std::vector<VariableSpec> vars;
    std::vector<std::vector<double>> columns(n);
    for (std::size_t c = 0; c < n; ++c) {
      vars.push_back(VariableSpec::continuous(names[c]));
      for (std::size_t r = 0; r < row; ++r) {
        const auto v = parse_number(cells[c][r]);
        if (!v || !std::isfinite(*v))
          throw FormatError(where(r + 1, names[c]), "'" + cells[c][r] + "' is not a finite number");
        columns[c].push_back(*v);
      }
    }
    return Dataset::continuous(std::move(vars), std::move(columns));
  }

  std::vector<VariableSpec> vars;
  std::vector<std::vector<int>> columns(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::string> levels(cells[c].begin(), cells[c].end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 2)
      throw FormatError("column '" + names[c] + "'", "only one observed level; discrete columns need at least two");
    const bool numeric = std::all_of(levels.begin(), levels.end(), [](const std::string& s) { return parse_number(s).has_value(); });
    if (numeric)
      std::stable_sort(levels.begin(), levels.end(),
                       [](const std::string& a, const std::string& b) { return *parse_number(a) < *parse_number(b); });
    std::map<std::string, int> code;
    for (std::size_t l = 0; l < levels.size(); ++l) code.emplace(levels[l], static_cast<int>(l));
    for (const auto& cell : cells[c]) columns[c].push_back(code.at(cell));
    vars.push_back(VariableSpec::discrete(names[c], std::move(levels)));
  }
  return Dataset::discrete(std::move(vars), std::move(columns));
}

Dataset load_csv(const std::string& path, std::optional<VariableKind> kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_csv(in, kind);
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "#kind: " << (data.is_discrete() ? "discrete" : "continuous") << '\n';
  const auto n = data.num_variables();
  for (std::size_t v = 0; v < n; ++v) out << (v ? "," : "") << quote_csv(data.variable(v).name);
  out << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v) out << ',';
      if (data.is_discrete())
        out << quote_csv(data.variable(v).levels[static_cast<std::size_t>(data.levels(v)[r])]);
      else
        out << format_double(data.values(v)[r]);
    }
    out << '\n';
  }
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ostringstream out;
  write_csv(out, data);
  write_text(path, out.str());
}

std::vector<std::string> variable_names(const std::vector<VariableSpec>& vars) {
  std::vector<std::string> out;
  for (const auto& v : vars) out.push_back(v.name);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

// ---- network JSON ----

namespace {

Json edge_list(const std::vector<Edge>& edges, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& e : edges)
    out.push_back({names[static_cast<std::size_t>(e.parent)], names[static_cast<std::size_t>(e.child)]});
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("", std::string("invalid JSON: ") + e.what());
  }
}

const Json& member(const Json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw FormatError(ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(ptr + "/" + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw FormatError(ptr, "expected a number");
  return j.get<double>();
}

int node_ref(const Json& j, const std::map<std::string, int>& index, std::size_t n, const std::string& ptr) {
  if (j.is_string()) {
    const auto it = index.find(j.get<std::string>());
    if (it == index.end()) throw FormatError(ptr, "unknown variable '" + j.get<std::string>() + "'");
    return it->second;
  }
  if (j.is_number_integer()) {
    const auto v = j.get<long>();
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw FormatError(ptr, "variable index out of range");
    return static_cast<int>(v);
  }
  throw FormatError(ptr, "expected a variable name or index");
}

std::vector<Edge> parse_edges(const Json& edges, const std::map<std::string, int>& index, std::size_t n,
                              const std::string& ptr) {
  if (!edges.is_array()) throw FormatError(ptr, "expected an array");
  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto p = ptr + "/" + std::to_string(i);
    const auto& e = edges[i];
    Edge edge;
    if (e.is_array()) {
      if (e.size() != 2) throw FormatError(p, "expected [parent, child]");
      edge = {node_ref(e[0], index, n, p + "/0"), node_ref(e[1], index, n, p + "/1")};
    } else if (e.is_object()) {
      edge = {node_ref(member(e, "parent", p), index, n, p + "/parent"),
              node_ref(member(e, "child", p), index, n, p + "/child")};
    } else {
      throw FormatError(p, "expected [parent, child] or {\"parent\", \"child\"}");
    }
    if (edge.parent == edge.child) throw FormatError(p, "self-loop");
    if (std::find(out.begin(), out.end(), edge) != out.end()) throw FormatError(p, "duplicate edge");
    out.push_back(edge);
  }
  return out;
}

}  // namespace

std::string network_to_json(const BayesNet& net) {
  const auto names = variable_names(net.variables());
  Json doc;
  Json vars = Json::array();
  for (const auto& v : net.variables()) {
    Json j;
    j["name"] = v.name;
    j["kind"] = v.is_discrete() ? "discrete" : "continuous";
    if (v.is_discrete()) j["levels"] = v.levels;
    vars.push_back(j);
  }
  doc["variables"] = vars;
  doc["edges"] = edge_list(net.dag().edges(), names);
  Json params = Json::object();
  for (std::size_t v = 0; v < net.size(); ++v) {
    Json p;
    if (net.variables()[v].is_discrete()) {
      const auto& cpt = net.cpt(v);
      Json rows = Json::array();
      for (std::size_t j = 0; j < cpt.num_configs(); ++j) {
        const auto row = cpt.row(j);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
      }
      p["cpt"] = rows;
    } else {
      const auto& g = net.gaussian(v);
      p["intercept"] = g.intercept;
      p["coefficients"] = g.coefficients;
      p["variance"] = g.variance;
    }
    params[names[v]] = p;
  }
  doc["params"] = params;
  return doc.dump(2) + "\n";
}

BayesNet network_from_json(const std::string& text) {
  const Json doc = parse_json(text);
  const auto& jvars = member(doc, "variables", "");
  if (!jvars.is_array() || jvars.empty()) throw FormatError("/variables", "expected a non-empty array");
  std::vector<VariableSpec> vars;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < jvars.size(); ++i) {
    const auto ptr = "/variables/" + std::to_string(i);
    const auto& jv = jvars[i];
    const auto& jname = member(jv, "name", ptr);
    if (!jname.is_string() || jname.get<std::string>().empty()) throw FormatError(ptr + "/name", "expected a non-empty string");
    const auto name = jname.get<std::string>();
    if (!index.emplace(name, static_cast<int>(i)).second) throw FormatError(ptr + "/name", "duplicate variable name");
    VariableKind kind = VariableKind::Discrete;
    if (jv.contains("kind")) {
      if (!jv["kind"].is_string()) throw FormatError(ptr + "/kind", "expected a string");
      try {
        kind = parse_kind(jv["kind"].get<std::string>());
      } catch (const InvalidArgument& e) {
        throw FormatError(ptr + "/kind", e.what());
      }
    }
    if (kind == VariableKind::Continuous) {
      vars.push_back(VariableSpec::continuous(name));
      continue;
    }
    const auto& jl = member(jv, "levels", ptr);
    if (!jl.is_array() || jl.size() < 2) throw FormatError(ptr + "/levels", "expected at least two levels");
    std::vector<std::string> levels;
    for (std::size_t l = 0; l < jl.size(); ++l) {
      if (jl[l].is_string()) levels.push_back(jl[l].get<std::string>());
      else if (jl[l].is_number()) levels.push_back(jl[l].dump());
      else throw FormatError(ptr + "/levels/" + std::to_string(l), "expected a string");
    }
    if (std::set<std::string>(levels.begin(), levels.end()).size() != levels.size())
      throw FormatError(ptr + "/levels", "duplicate level");
    vars.push_back(VariableSpec::discrete(name, std::move(levels)));
  }
  for (std::size_t i = 1; i < vars.size(); ++i)
    if (vars[i].kind != vars[0].kind) throw FormatError("/variables/" + std::to_string(i) + "/kind", "mixed variable kinds");

  const auto n = vars.size();
  const auto edges = parse_edges(doc.contains("edges") ? doc["edges"] : Json::array(), index, n, "/edges");
  Dag dag(static_cast<int>(n));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (dag.creates_cycle(edges[i].parent, edges[i].child)) throw FormatError("/edges/" + std::to_string(i), "edge closes a cycle");
    dag.add_edge(edges[i]);
  }

  const auto& jparams = member(doc, "params", "");
  if (!jparams.is_object()) throw FormatError("/params", "expected an object");
  std::vector<NodeParams> params;
  for (std::size_t v = 0; v < n; ++v) {
    const auto ptr = "/params/" + vars[v].name;
    const auto& jp = member(jparams, vars[v].name, "/params");
    const auto& parents = dag.parents(static_cast<int>(v));
    if (vars[v].is_discrete()) {
      Cpt cpt;
      cpt.cardinality = vars[v].cardinality();
      for (int p : parents) cpt.parent_cardinalities.push_back(vars[static_cast<std::size_t>(p)].cardinality());
      const auto& rows = member(jp, "cpt", ptr);
      if (!rows.is_array() || rows.size() != cpt.num_configs())
        throw FormatError(ptr + "/cpt", "expected " + std::to_string(cpt.num_configs()) + " rows");
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto rp = ptr + "/cpt/" + std::to_string(j);
        if (!rows[j].is_array() || rows[j].size() != static_cast<std::size_t>(cpt.cardinality))
          throw FormatError(rp, "expected " + std::to_string(cpt.cardinality) + " probabilities");
        double sum = 0.0;
        for (std::size_t k = 0; k < rows[j].size(); ++k) {
          const double x = number(rows[j][k], rp + "/" + std::to_string(k));
          if (!(x >= 0.0 && x <= 1.0)) throw FormatError(rp + "/" + std::to_string(k), "probability outside [0, 1]");
          sum += x;
          cpt.table.push_back(x);
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw FormatError(rp, "row sums to " + format_double(sum) + ", not 1");
      }
      params.emplace_back(std::move(cpt));
    } else {
      LinearGaussian g;
      g.intercept = number(member(jp, "intercept", ptr), ptr + "/intercept");
      g.variance = number(member(jp, "variance", ptr), ptr + "/variance");
      if (!(g.variance > 0.0)) throw FormatError(ptr + "/variance", "variance must be positive");
      const auto& jc = member(jp, "coefficients", ptr);
      if (!jc.is_array() || jc.size() != parents.size())
        throw FormatError(ptr + "/coefficients", "expected " + std::to_string(parents.size()) + " coefficients");
      for (std::size_t k = 0; k < jc.size(); ++k) g.coefficients.push_back(number(jc[k], ptr + "/coefficients/" + std::to_string(k)));
      params.emplace_back(std::move(g));
    }
  }
  return BayesNet(std::move(vars), std::move(dag), std::move(params));
}

void save_network(const std::string& path, const BayesNet& net) { write_text(path, network_to_json(net)); }

BayesNet load_network(const std::string& path) { return network_from_json(read_text(path)); }

// ---- DOT ----

namespace {

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dag_to_dot(const Dag& dag, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "digraph bn {\n";
  for (int v = 0; v < dag.size(); ++v) out << "  " << dot_id(names[static_cast<std::size_t>(v)]) << ";\n";
  for (const auto& e : dag.edges())
    out << "  " << dot_id(names[static_cast<std::size_t>(e.parent)]) << " -> "
        << dot_id(names[static_cast<std::size_t>(e.child)]) << ";\n";
  out << "}\n";
  return out.str();
}

std::string weighted_to_dot(const WeightedDigraph& g, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "digraph consensus {\n";
  for (int v = 0; v < g.size(); ++v) out << "  " << dot_id(names[static_cast<std::size_t>(v)]) << ";\n";
  for (const auto& [e, w] : g.weights())
    out << "  " << dot_id(names[static_cast<std::size_t>(e.parent)]) << " -> "
        << dot_id(names[static_cast<std::size_t>(e.child)]) << " [label=\"" << w << "\"];\n";
  out << "}\n";
  return out.str();
}

// ---- graph JSON ----

namespace {

Json graph_json(const std::vector<std::string>& names, const std::vector<std::pair<Edge, long>>& edges, bool weighted) {
  Json doc;
  doc["variables"] = names;
  Json je = Json::array();
  for (const auto& [e, w] : edges) {
    Json j;
    j["parent"] = names[static_cast<std::size_t>(e.parent)];
    j["child"] = names[static_cast<std::size_t>(e.child)];
    if (weighted) j["weight"] = w;
    je.push_back(j);
  }
  doc["edges"] = je;
  return doc;
}

struct ParsedGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<long> weights;
};

ParsedGraph parse_graph(const std::string& text, const std::optional<std::vector<std::string>>& names) {
  const Json doc = parse_json(text);
  const auto& jv = member(doc, "variables", "");
  if (!jv.is_array()) throw FormatError("/variables", "expected an array of names");
  std::vector<std::string> file_names;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    if (!jv[i].is_string()) throw FormatError("/variables/" + std::to_string(i), "expected a string");
    file_names.push_back(jv[i].get<std::string>());
    if (!index.emplace(file_names.back(), static_cast<int>(i)).second)
      throw FormatError("/variables/" + std::to_string(i), "duplicate variable name");
  }
  if (names && *names != file_names) throw FormatError("/variables", "variable list does not match the dataset");
  ParsedGraph out;
  out.n = file_names.size();
  const Json empty = Json::array();
  const auto& je = doc.contains("edges") ? doc["edges"] : empty;
  out.edges = parse_edges(je, index, out.n, "/edges");
  for (std::size_t i = 0; i < je.size(); ++i) {
    long w = 1;
    if (je[i].is_object() && je[i].contains("weight")) {
      const auto& jw = je[i]["weight"];
      if (!jw.is_number_integer() || jw.get<long>() < 1)
        throw FormatError("/edges/" + std::to_string(i) + "/weight", "expected a positive integer");
      w = jw.get<long>();
    }
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace

std::string poset_to_json(const Poset& poset, const std::vector<std::string>& names) {
  std::vector<std::pair<Edge, long>> edges;
  for (const auto& e : poset.edges()) edges.emplace_back(e, 1);
  return graph_json(names, edges, false).dump(2) + "\n";
}

std::string weighted_to_json(const WeightedDigraph& g, const std::vector<std::string>& names) {
  std::vector<std::pair<Edge, long>> edges(g.weights().begin(), g.weights().end());
  return graph_json(names, edges, true).dump(2) + "\n";
}

Poset poset_from_json(const std::string& text, const std::optional<std::vector<std::string>>& names) {
  const auto g = parse_graph(text, names);
  if (!is_acyclic(static_cast<int>(g.n), g.edges)) throw FormatError("/edges", "poset contains a cycle");
  return Poset(static_cast<int>(g.n), g.edges);
}

WeightedDigraph weighted_from_json(const std::string& text, const std::optional<std::vector<std::string>>& names) {
  const auto g = parse_graph(text, names);
  WeightedDigraph out(static_cast<int>(g.n));
  for (std::size_t i = 0; i < g.edges.size(); ++i) out.set(g.edges[i].parent, g.edges[i].child, g.weights[i]);
  return out;
}

// ---- reports ----

std::string edge_report_to_csv(const EdgeTestReport& report, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "parent,child,present_data,present_null,p_raw,p_adjusted,rejected\n";
  for (const auto& r : report.rows)
    out << quote_csv(names[static_cast<std::size_t>(r.edge.parent)]) << ','
        << quote_csv(names[static_cast<std::size_t>(r.edge.child)]) << ',' << r.present_data << ','
        << r.present_null << ',' << format_double(r.p_raw) << ',' << format_double(r.p_adjusted) << ','
        << (r.rejected ? "true" : "false") << '\n';
  return out.str();
}

std::string edge_report_to_json(const EdgeTestReport& report, const std::vector<std::string>& names) {
  Json doc;
  doc["k_b"] = report.k_b;
  doc["alpha"] = report.alpha;
  doc["correction"] = correction_name(report.correction);
  doc["failed_replicates"] = report.failed_replicates;
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json j;
    j["parent"] = names[static_cast<std::size_t>(r.edge.parent)];
    j["child"] = names[static_cast<std::size_t>(r.edge.child)];
    j["present_data"] = r.present_data;
    j["present_null"] = r.present_null;
    j["p_raw"] = r.p_raw;
    j["p_adjusted"] = r.p_adjusted;
    j["rejected"] = r.rejected;
    j["accepted"] = r.accepted;
    rows.push_back(j);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

namespace {

std::string edges_text(const Dag& dag, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& e : dag.edges()) {
    if (!out.empty()) out += ';';
    out += names[static_cast<std::size_t>(e.parent)] + "->" + names[static_cast<std::size_t>(e.child)];
  }
  return out;
}

constexpr auto kNone = static_cast<std::size_t>(-1);

}  // namespace

std::string landscape_to_csv(const LandscapeReport& report, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "index,edges,fitness,optimum,basin,successor\n";
  std::vector<bool> is_opt(report.dags.size(), false);
  for (auto o : report.optima) is_opt[o] = true;
  for (std::size_t i = 0; i < report.dags.size(); ++i) {
    out << i << ',' << quote_csv(edges_text(report.dags[i], names)) << ',' << format_double(report.fitness[i]) << ','
        << (is_opt[i] ? 1 : 0) << ',' << report.optima[report.basin[i]] << ',';
    if (report.successor[i] != kNone) out << report.successor[i];
    out << '\n';
  }
  return out.str();
}

std::string landscape_to_json(const LandscapeReport& report, const std::vector<std::string>& names) {
  Json doc;
  doc["variables"] = names;
  doc["dag_count"] = report.dag_count();
  doc["unimodal"] = report.unimodal;
  doc["true_model_rank"] = report.true_model_rank ? Json(*report.true_model_rank) : Json(nullptr);
  doc["max_at_true"] = report.max_at_true;
  Json optima = Json::array();
  for (std::size_t k = 0; k < report.optima.size(); ++k) {
    const auto i = report.optima[k];
    Json j;
    j["index"] = i;
    j["edges"] = edge_list(report.dags[i].edges(), names);
    j["fitness"] = report.fitness[i];
    j["basin_size"] = report.basin_sizes[k];
    optima.push_back(j);
  }
  doc["optima"] = optima;
  Json all = Json::array();
  for (std::size_t i = 0; i < report.dags.size(); ++i) {
    Json j;
    j["edges"] = edge_list(report.dags[i].edges(), names);
    j["fitness"] = report.fitness[i];
    all.push_back(j);
  }
  doc["structures"] = all;
  return doc.dump(2) + "\n";
}

std::string landscape_to_dot(const LandscapeReport& report, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "digraph landscape {\n";
  std::vector<bool> is_opt(report.dags.size(), false);
  for (auto o : report.optima) is_opt[o] = true;
  for (std::size_t i = 0; i < report.dags.size(); ++i) {
    auto label = dot_id(edges_text(report.dags[i], names));
    label.insert(label.size() - 1, "\\n" + format_double(report.fitness[i]));
    out << "  m" << i << " [label=" << label
        << (is_opt[i] ? ", shape=doublecircle" : "") << "];\n";
  }
  for (std::size_t i = 0; i < report.dags.size(); ++i)
    if (report.successor[i] != kNone) out << "  m" << i << " -> m" << report.successor[i] << ";\n";
  out << "}\n";
  return out.str();
}

std::string metrics_to_json(const EvalMetrics& m) {
  Json doc;
  doc["tp"] = m.tp;
  doc["fp"] = m.fp;
  doc["fn"] = m.fn;
  doc["ppv"] = m.ppv;
  doc["tpr"] = m.tpr;
  return doc.dump(2) + "\n";
}

std::string submod_to_json(const SubmodReport& report, const std::vector<std::string>& names) {
  Json doc;
  doc["mode"] = report.mode;
  doc["trials"] = report.trials.size();
  doc["violations"] = report.violations;
  doc["violation_fraction"] = report.violation_fraction;
  doc["median_violation"] = report.median_violation;
  doc["max_violation"] = report.max_violation;
  doc["score_violations"] = report.score_violations;
  doc["max_lemma1_residual"] = report.max_lemma1_residual;
  Json rows = Json::array();
  for (const auto& t : report.trials) {
    Json j;
    j["x"] = edge_list(t.x.edges(), names);
    j["y"] = edge_list(t.y.edges(), names);
    j["e"] = {names[static_cast<std::size_t>(t.e.parent)], names[static_cast<std::size_t>(t.e.child)]};
    j["gain_x"] = t.gain_x;
    j["gain_y"] = t.gain_y;
    j["delta_x"] = t.delta_x;
    j["delta_y"] = t.delta_y;
    j["lemma1_residual"] = t.lemma1_residual;
    rows.push_back(j);
  }
  doc["details"] = rows;
  return doc.dump(2) + "\n";
}

std::string suite_to_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "repeat,method,tp,fp,fn,ppv,tpr,density\n";
  for (const auto& r : report.rows)
    out << r.repeat << ',' << r.method << ',' << r.metrics.tp << ',' << r.metrics.fp << ',' << r.metrics.fn << ','
        << format_double(r.metrics.ppv) << ',' << format_double(r.metrics.tpr) << ',' << format_double(r.density) << '\n';
  return out.str();
}

std::string suite_to_json(const SuiteReport& report) {
  const auto& c = report.config;
  Json doc;
  doc["config"] = {{"n", c.n},           {"delta", c.delta},     {"m", c.m},
                   {"nu", c.nu},         {"repeats", c.repeats}, {"methods", c.methods},
                   {"score", c.kind.name()}, {"k_p", c.k_p},     {"k_b", c.k_b},
                   {"alpha", c.alpha},   {"mode", c.mode == MetricMode::Directed ? "directed" : "skeleton"},
                   {"seed", c.seed}};
  doc["true_density"] = report.true_density;
  Json summary = Json::array();
  for (const auto& s : report.summary)
    summary.push_back({{"method", s.method},
                       {"median_ppv", s.median_ppv},
                       {"median_tpr", s.median_tpr},
                       {"mean_ppv", s.mean_ppv},
                       {"mean_tpr", s.mean_tpr},
                       {"mean_density", s.mean_density}});
  doc["summary"] = summary;
  Json posets = Json::array();
  for (const auto& p : report.posets)
    posets.push_back({{"repeat", p.repeat},
                      {"confidence_edges", p.confidence_edges},
                      {"agony_edges", p.agony_edges},
                      {"missing_from_agony", p.missing}});
  doc["posets"] = posets;
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"repeat", r.repeat},
                    {"method", r.method},
                    {"tp", r.metrics.tp},
                    {"fp", r.metrics.fp},
                    {"fn", r.metrics.fn},
                    {"ppv", r.metrics.ppv},
                    {"tpr", r.metrics.tpr},
                    {"density", r.density}});
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace ebnet
