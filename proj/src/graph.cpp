#include "ebnet/graph.hpp"

#include <algorithm>
#include <string>

#include "ebnet/error.hpp"

namespace ebnet {

std::optional<std::vector<int>> topological_sort(int n, std::span<const Edge> edges) {
  const auto un = static_cast<std::size_t>(n);
  std::vector<int> indegree(un, 0);
  std::vector<std::vector<int>> out(un);
  for (const auto& e : edges) {
    if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n)
      throw InvalidArgument("edge endpoint out of range");
    if (e.parent == e.child) return std::nullopt;
    out[static_cast<std::size_t>(e.parent)].push_back(e.child);
    ++indegree[static_cast<std::size_t>(e.child)];
  }
  // Smallest-index-first Kahn so the order is canonical.
  std::vector<int> ready;
  for (int v = n - 1; v >= 0; --v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  std::vector<int> order;
  order.reserve(un);
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int w : out[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
  }
  if (order.size() != un) return std::nullopt;
  return order;
}

bool is_acyclic(int n, std::span<const Edge> edges) { return topological_sort(n, edges).has_value(); }

Dag::Dag(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("negative node count");
  adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  parents_.resize(static_cast<std::size_t>(n));
}

Dag::Dag(int n, std::span<const Edge> edges) : Dag(n) {
  for (const auto& e : edges) {
    check_node(e.parent);
    check_node(e.child);
    if (e.parent == e.child) throw InvalidArgument("self-loop on node " + std::to_string(e.parent));
    if (has_edge(e)) continue;
    adj_[index(e.parent, e.child)] = 1;
    ++edge_count_;
  }
  if (!is_acyclic(n, edges)) throw InvalidArgument("edge set contains a directed cycle");
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < n; ++p)
      if (has_edge(p, c)) parents_[static_cast<std::size_t>(c)].push_back(p);
}

void Dag::check_node(int v) const {
  if (v < 0 || v >= n_) throw InvalidArgument("node " + std::to_string(v) + " out of range");
}

std::vector<int> Dag::children(int parent) const {
  std::vector<int> out;
  for (int c = 0; c < n_; ++c)
    if (has_edge(parent, c)) out.push_back(c);
  return out;
}

bool Dag::has_path(int from, int to) const {
  if (from == to) return true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{to};
  seen[static_cast<std::size_t>(to)] = 1;
  // Walk backwards through parents from `to`.
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int p : parents_[static_cast<std::size_t>(v)]) {
      if (p == from) return true;
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  return false;
}

bool Dag::creates_cycle(int parent, int child) const { return has_path(child, parent); }

void Dag::add_edge(int parent, int child) {
  check_node(parent);
  check_node(child);
  if (parent == child) throw InvalidArgument("self-loop on node " + std::to_string(parent));
  if (has_edge(parent, child)) return;
  if (creates_cycle(parent, child))
    throw InvalidArgument("edge " + std::to_string(parent) + "->" + std::to_string(child) +
                          " creates a cycle");
  adj_[index(parent, child)] = 1;
  auto& ps = parents_[static_cast<std::size_t>(child)];
  ps.insert(std::lower_bound(ps.begin(), ps.end(), parent), parent);
  ++edge_count_;
}

void Dag::remove_edge(int parent, int child) {
  check_node(parent);
  check_node(child);
  if (!has_edge(parent, child)) return;
  adj_[index(parent, child)] = 0;
  auto& ps = parents_[static_cast<std::size_t>(child)];
  ps.erase(std::lower_bound(ps.begin(), ps.end(), parent));
  --edge_count_;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int p = 0; p < n_; ++p)
    for (int c = 0; c < n_; ++c)
      if (has_edge(p, c)) out.push_back({p, c});
  return out;
}

std::vector<int> Dag::topological_order() const {
  const auto e = edges();
  return *topological_sort(n_, e);
}

std::uint64_t Dag::mask() const {
  if (n_ > 8) throw InvalidArgument("edge mask requires at most 8 nodes");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < adj_.size(); ++i)
    if (adj_[i]) m |= std::uint64_t{1} << i;
  return m;
}

Poset::Poset(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("negative node count");
  allowed_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

Poset::Poset(int n, std::span<const Edge> allowed) : Poset(n) {
  if (!is_acyclic(n, allowed)) throw InvalidArgument("poset is not acyclic");
  for (const auto& e : allowed) {
    auto& slot = allowed_[static_cast<std::size_t>(e.parent) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(e.child)];
    if (!slot) {
      slot = 1;
      ++count_;
    }
  }
}

std::vector<Edge> Poset::edges() const {
  std::vector<Edge> out;
  out.reserve(count_);
  for (int p = 0; p < n_; ++p)
    for (int c = 0; c < n_; ++c)
      if (allows(p, c)) out.push_back({p, c});
  return out;
}

bool Poset::contains(const Dag& dag) const {
  if (dag.size() != n_) return false;
  for (const auto& e : dag.edges())
    if (!allows(e.parent, e.child)) return false;
  return true;
}

Poset transitive_closure(const Dag& dag) {
  std::vector<Edge> closure;
  for (int p = 0; p < dag.size(); ++p)
    for (int c = 0; c < dag.size(); ++c)
      if (p != c && dag.has_path(p, c)) closure.push_back({p, c});
  return Poset(dag.size(), closure);
}

void WeightedDigraph::add(int parent, int child, long weight) {
  if (parent < 0 || parent >= n_ || child < 0 || child >= n_)
    throw InvalidArgument("edge endpoint out of range");
  if (parent == child) throw InvalidArgument("self-loop in weighted digraph");
  if (weight < 0) throw InvalidArgument("negative edge weight");
  if (weight == 0) return;
  weights_[{parent, child}] += weight;
}

void WeightedDigraph::set(int parent, int child, long weight) {
  if (weight < 0) throw InvalidArgument("negative edge weight");
  if (weight == 0) {
    weights_.erase({parent, child});
    return;
  }
  if (parent < 0 || parent >= n_ || child < 0 || child >= n_)
    throw InvalidArgument("edge endpoint out of range");
  if (parent == child) throw InvalidArgument("self-loop in weighted digraph");
  weights_[{parent, child}] = weight;
}

long WeightedDigraph::weight(int parent, int child) const {
  auto it = weights_.find({parent, child});
  return it == weights_.end() ? 0 : it->second;
}

long WeightedDigraph::total_weight() const {
  long total = 0;
  for (const auto& [e, w] : weights_) total += w;
  return total;
}

std::vector<Edge> WeightedDigraph::edges() const {
  std::vector<Edge> out;
  out.reserve(weights_.size());
  for (const auto& [e, w] : weights_) out.push_back(e);
  return out;
}

}  // namespace ebnet
