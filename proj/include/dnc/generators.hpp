#pragma once

// Random benchmark graphs: k-regular (pairing model) and Erdos-Renyi G(n, p).

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/graph.hpp"

namespace dnc {

namespace detail {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

// True if some pair of vertices with leftover stubs can still be joined by a new edge.
inline bool can_complete(const EdgeSet& edges, const std::map<std::size_t, std::size_t>& leftover) {
  if (leftover.empty()) return true;
  for (auto a = leftover.begin(); a != leftover.end(); ++a) {
    for (auto b = std::next(a); b != leftover.end(); ++b) {
      if (!edges.contains({a->first, b->first})) return true;
    }
  }
  return false;
}

// One attempt of the pairing model: shuffle stubs, pair neighbours, keep legal pairs and
// re-pair the rejected stubs. Returns false when the leftover stubs cannot be completed.
inline bool try_pairing(std::size_t n, std::size_t k, std::mt19937_64& rng, EdgeSet& edges) {
  edges.clear();
  std::vector<std::size_t> stubs;
  stubs.reserve(n * k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t v = 0; v < n; ++v) stubs.push_back(v);
  }
  while (!stubs.empty()) {
    std::map<std::size_t, std::size_t> leftover;
    std::shuffle(stubs.begin(), stubs.end(), rng);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      auto u = stubs[i];
      auto v = stubs[i + 1];
      if (u > v) std::swap(u, v);
      if (u != v && !edges.contains({u, v})) {
        edges.insert({u, v});
      } else {
        ++leftover[u];
        ++leftover[v];
      }
    }
    if (!can_complete(edges, leftover)) return false;
    stubs.clear();
    for (auto [v, count] : leftover) stubs.insert(stubs.end(), count, v);
  }
  return true;
}

}  // namespace detail

// Simple k-regular graph on n vertices, deterministic in `seed`.
inline Graph random_regular(std::size_t n, std::size_t k, std::uint64_t seed) {
  if ((n * k) % 2 != 0) {
    throw ParameterError("no " + std::to_string(k) + "-regular graph on " + std::to_string(n) +
                         " vertices: n*k must be even");
  }
  if (k >= n && !(k == 0 && n == 0)) {
    throw ParameterError("degree " + std::to_string(k) + " must be smaller than vertex count " + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  detail::EdgeSet edges;
  constexpr int kMaxRestarts = 100000;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    if (detail::try_pairing(n, k, rng, edges)) {
      Graph g(n);
      for (auto [u, v] : edges) g.add_edge(u, v);
      return g;
    }
  }
  throw ParameterError("random_regular: pairing model did not converge");
}

// G(n, p): each of the n(n-1)/2 pairs is an edge independently with probability p.
inline Graph random_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (unif(rng) < p) g.add_edge(u, v);
    }
  }
  return g;
}

}  // namespace dnc
