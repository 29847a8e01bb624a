#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/polynomial.hpp"

namespace dnc {

struct Edge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected simple graph. Vertices are spins, edges are quadratic couplings.
class Graph {
 public:
  explicit Graph(std::size_t num_vertices = 0) : adjacency_(num_vertices) {}

  Graph(std::size_t num_vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
      : Graph(num_vertices) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  void add_edge(std::size_t u, std::size_t v, double weight = 1.0) {
    if (u >= num_vertices() || v >= num_vertices()) {
      throw ParameterError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for " +
                           std::to_string(num_vertices()) + " vertices");
    }
    if (u == v) throw ParameterError("self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v)) {
      throw ParameterError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    edges_.push_back({u, v, weight});
  }

  std::size_t num_vertices() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

  bool has_edge(std::size_t u, std::size_t v) const {
    const auto& a = adjacency_.at(u);
    return std::find(a.begin(), a.end(), v) != a.end();
  }

  bool weighted() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight != 1.0; });
  }

  double total_weight() const noexcept {
    double w = 0.0;
    for (const auto& e : edges_) w += e.weight;
    return w;
  }

  // Returns k if every vertex has degree k, -1 otherwise (and for the empty graph).
  long regular_degree() const noexcept {
    if (adjacency_.empty()) return -1;
    const std::size_t k = adjacency_.front().size();
    for (const auto& a : adjacency_) {
      if (a.size() != k) return -1;
    }
    return static_cast<long>(k);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_vertices() == b.num_vertices() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
};

// MaxCut as QUBO: E(s) = sum_{(i,j)} w_ij s_i s_j / 2 - W / 2, i.e. minus the cut weight.
inline PuboPolynomial maxcut_to_qubo(const Graph& g) {
  PuboPolynomial poly(g.num_vertices());
  double total = 0.0;
  for (const auto& e : g.edges()) {
    poly.add_term({e.u, e.v}, e.weight / 2.0);
    total += e.weight;
  }
  poly.add_constant(-total / 2.0);
  return poly;
}

// Weight of edges cut by s (endpoints with opposite spins).
inline double cut_weight(const Graph& g, const SpinAssignment& s) {
  if (s.size() != g.num_vertices()) throw DimensionError("assignment size differs from vertex count");
  double w = 0.0;
  for (const auto& e : g.edges()) {
    if (s[e.u] != s[e.v]) w += e.weight;
  }
  return w;
}

// Interaction graph of a polynomial's quadratic terms. Higher-degree terms are rejected
// since the divide-and-conquer reduction takes QUBO input.
inline Graph interaction_graph(const PuboPolynomial& poly) {
  Graph g(poly.num_vars());
  for (const auto& [vars, c] : poly.terms()) {
    if (vars.size() > 2) {
      throw UnsupportedDegreeError("interaction graph requires degree <= 2, found a term of degree " +
                                   std::to_string(vars.size()));
    }
    if (vars.size() == 2) g.add_edge(vars[0], vars[1], c);
  }
  return g;
}

}  // namespace dnc
