#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ebnet {

/// Directed edge parent -> child over node indices.
struct Edge {
  int parent = 0;
  int child = 0;

  auto operator<=>(const Edge&) const = default;
};

/// True when the directed graph on `n` nodes with `edges` has no cycle
/// (self-loops count as cycles).
bool is_acyclic(int n, std::span<const Edge> edges);

/// Topological order of the graph, or nullopt if it is cyclic.
std::optional<std::vector<int>> topological_sort(int n, std::span<const Edge> edges);

/// Directed acyclic graph. Mutators refuse self-loops and cycle-creating edges.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n);
  /// Throws InvalidArgument on self-loops, out-of-range nodes or cycles.
  Dag(int n, std::span<const Edge> edges);
  Dag(int n, std::initializer_list<Edge> edges) : Dag(n, std::span<const Edge>(edges.begin(), edges.size())) {}

  int size() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }
  bool has_edge(int parent, int child) const { return adj_[index(parent, child)] != 0; }
  bool has_edge(Edge e) const { return has_edge(e.parent, e.child); }

  /// Ascending parent indices of `child`.
  const std::vector<int>& parents(int child) const { return parents_.at(static_cast<std::size_t>(child)); }
  std::vector<int> children(int parent) const;

  /// True if adding parent -> child would close a directed cycle, i.e. a path
  /// child ~> parent already exists (or parent == child).
  bool creates_cycle(int parent, int child) const;
  bool has_path(int from, int to) const;

  void add_edge(int parent, int child);
  void add_edge(Edge e) { add_edge(e.parent, e.child); }
  void remove_edge(int parent, int child);
  void remove_edge(Edge e) { remove_edge(e.parent, e.child); }

  /// Edges sorted by (parent, child).
  std::vector<Edge> edges() const;
  std::vector<int> topological_order() const;

  /// Edge-set bitmask over ordered pairs (p, c), bit p*n + c. Requires n <= 8.
  std::uint64_t mask() const;

  bool operator==(const Dag& other) const { return n_ == other.n_ && adj_ == other.adj_; }
  bool operator<(const Dag& other) const { return n_ != other.n_ ? n_ < other.n_ : adj_ < other.adj_; }

 private:
  std::size_t index(int p, int c) const {
    return static_cast<std::size_t>(p) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c);
  }
  void check_node(int v) const;

  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<int>> parents_;
};

/// Acyclic set of permitted edges constraining structure search.
class Poset {
 public:
  Poset() = default;
  explicit Poset(int n);
  /// Throws InvalidArgument when `allowed` contains a self-loop or a cycle.
  Poset(int n, std::span<const Edge> allowed);
  Poset(int n, std::initializer_list<Edge> allowed)
      : Poset(n, std::span<const Edge>(allowed.begin(), allowed.size())) {}

  int size() const { return n_; }
  bool allows(int parent, int child) const {
    return allowed_[static_cast<std::size_t>(parent) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(child)] != 0;
  }
  std::size_t edge_count() const { return count_; }
  std::vector<Edge> edges() const;
  bool contains(const Dag& dag) const;

  bool operator==(const Poset&) const = default;

 private:
  int n_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> allowed_;
};

/// Poset made of the transitive closure of `dag`.
Poset transitive_closure(const Dag& dag);

/// Directed graph with positive integer edge weights; may contain cycles.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(int n) : n_(n) {}

  int size() const { return n_; }
  /// Adds `weight` to the edge, creating it if absent. Zero additions are ignored.
  void add(int parent, int child, long weight = 1);
  /// Sets the weight; weight 0 removes the edge.
  void set(int parent, int child, long weight);
  long weight(int parent, int child) const;
  bool has_edge(int parent, int child) const { return weight(parent, child) > 0; }
  std::size_t edge_count() const { return weights_.size(); }
  long total_weight() const;
  const std::map<Edge, long>& weights() const { return weights_; }
  std::vector<Edge> edges() const;

  bool operator==(const WeightedDigraph&) const = default;

 private:
  int n_ = 0;
  std::map<Edge, long> weights_;
};

}  // namespace ebnet
