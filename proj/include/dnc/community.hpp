#pragma once

// Community detection on the interaction graph.
//
// detect_multilevel() is a Louvain-style modularity maximizer (unweighted edges,
// resolution 1). refine_boundary() then relabels single vertices to minimize
//
//   g(C) = max{ |B|, max_c |community c| }
//
// where B is the set of boundary vertices, i.e. vertices with at least one edge
// into another community. |B| is the variable count of the reduced instance.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/graph.hpp"

namespace dnc {

namespace detail {

// Renumbers ids to 0..k-1 preserving their relative order.
inline std::size_t compact_ids(std::vector<std::size_t>& ids) {
  std::vector<std::size_t> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto& c : ids) c = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
  return sorted.size();
}

}  // namespace detail

// Membership vector plus the derived boundary (B_c) and core (T_c) sets.
class CommunityAssignment {
 public:
  CommunityAssignment() = default;

  // Community ids are compacted to a contiguous range, keeping their relative order.
  CommunityAssignment(const Graph& g, std::vector<std::size_t> membership) : membership_(std::move(membership)) {
    if (membership_.size() != g.num_vertices()) {
      throw DimensionError("membership has " + std::to_string(membership_.size()) + " entries for " +
                           std::to_string(g.num_vertices()) + " vertices");
    }
    const std::size_t k = detail::compact_ids(membership_);
    boundary_flag_.assign(g.num_vertices(), false);
    for (const auto& e : g.edges()) {
      if (membership_[e.u] != membership_[e.v]) {
        boundary_flag_[e.u] = true;
        boundary_flag_[e.v] = true;
      }
    }
    members_.assign(k, {});
    boundary_.assign(k, {});
    core_.assign(k, {});
    for (std::size_t v = 0; v < membership_.size(); ++v) {
      const auto c = membership_[v];
      members_[c].push_back(v);
      if (boundary_flag_[v]) {
        boundary_[c].push_back(v);
        global_boundary_.push_back(v);
      } else {
        core_[c].push_back(v);
      }
    }
  }

  std::size_t num_vertices() const noexcept { return membership_.size(); }
  std::size_t num_communities() const noexcept { return members_.size(); }
  const std::vector<std::size_t>& membership() const noexcept { return membership_; }
  std::size_t community_of(std::size_t v) const { return membership_.at(v); }

  const std::vector<std::size_t>& members(std::size_t c) const { return members_.at(c); }
  const std::vector<std::size_t>& boundary_of(std::size_t c) const { return boundary_.at(c); }
  const std::vector<std::size_t>& core_of(std::size_t c) const { return core_.at(c); }

  // B, sorted ascending.
  const std::vector<std::size_t>& global_boundary() const noexcept { return global_boundary_; }
  bool is_boundary(std::size_t v) const { return boundary_flag_.at(v); }

  std::size_t largest_community() const noexcept {
    std::size_t m = 0;
    for (const auto& c : members_) m = std::max(m, c.size());
    return m;
  }

  double mean_community_size() const noexcept {
    return members_.empty() ? 0.0 : static_cast<double>(membership_.size()) / members_.size();
  }

 private:
  std::vector<std::size_t> membership_;
  std::vector<bool> boundary_flag_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> boundary_;
  std::vector<std::vector<std::size_t>> core_;
  std::vector<std::size_t> global_boundary_;
};

inline std::size_t score_g(const CommunityAssignment& ca) {
  return std::max(ca.global_boundary().size(), ca.largest_community());
}

inline std::size_t score_g(const Graph& g, const CommunityAssignment& ca) {
  if (ca.num_vertices() != g.num_vertices()) throw DimensionError("community assignment does not match graph");
  return score_g(ca);
}

// Newman modularity of a partition of the unweighted graph (edge weights ignored).
inline double modularity(const Graph& g, const std::vector<std::size_t>& membership) {
  if (membership.size() != g.num_vertices()) throw DimensionError("membership does not match graph");
  const double m = static_cast<double>(g.num_edges());
  if (m == 0.0) return 0.0;
  std::size_t k = 0;
  for (auto c : membership) k = std::max(k, c + 1);
  std::vector<double> inside(k, 0.0), degree_sum(k, 0.0);
  for (const auto& e : g.edges()) {
    if (membership[e.u] == membership[e.v]) inside[membership[e.u]] += 1.0;
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) degree_sum[membership[v]] += g.degree(v);
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    q += inside[c] / m - (degree_sum[c] / (2.0 * m)) * (degree_sum[c] / (2.0 * m));
  }
  return q;
}

namespace detail {

// Weighted graph used between Louvain levels. self_loop[i] holds the weight of edges
// collapsed inside node i; strength[i] counts them twice.
struct LouvainLevel {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
  std::vector<double> self_loop;
  std::vector<double> strength;

  std::size_t size() const noexcept { return adjacency.size(); }
};

inline LouvainLevel level_from_graph(const Graph& g) {
  LouvainLevel lvl;
  const auto n = g.num_vertices();
  lvl.adjacency.resize(n);
  lvl.self_loop.assign(n, 0.0);
  lvl.strength.assign(n, 0.0);
  for (const auto& e : g.edges()) {
    lvl.adjacency[e.u].push_back({e.v, 1.0});
    lvl.adjacency[e.v].push_back({e.u, 1.0});
    lvl.strength[e.u] += 1.0;
    lvl.strength[e.v] += 1.0;
  }
  return lvl;
}

// Greedy single-node moves until no move strictly increases modularity.
// Returns true if any node changed community.
inline bool louvain_local_moves(const LouvainLevel& lvl, double total_strength, std::mt19937_64& rng,
                                std::vector<std::size_t>& comm) {
  constexpr double kEps = 1e-12;
  const auto n = lvl.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += lvl.strength[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;

  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) {
      const auto home = comm[i];
      const double ki = lvl.strength[i];
      touched.clear();
      for (auto [j, w] : lvl.adjacency[i]) {
        const auto c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[home] -= ki;
      auto best = home;
      double best_gain = link[home] - tot[home] * ki / total_strength;
      for (auto c : touched) {
        const double gain = link[c] - tot[c] * ki / total_strength;
        if (gain > best_gain + kEps) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += ki;
      for (auto c : touched) link[c] = 0.0;
      link[home] = 0.0;
      if (best != home) {
        comm[i] = best;
        improved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

inline LouvainLevel contract(const LouvainLevel& lvl, const std::vector<std::size_t>& comm, std::size_t k) {
  LouvainLevel next;
  next.adjacency.resize(k);
  next.self_loop.assign(k, 0.0);
  next.strength.assign(k, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (std::size_t i = 0; i < lvl.size(); ++i) {
    const auto ci = comm[i];
    next.self_loop[ci] += lvl.self_loop[i];
    next.strength[ci] += lvl.strength[i];
    for (auto [j, w] : lvl.adjacency[i]) {
      if (j < i) continue;  // each undirected edge once
      const auto cj = comm[j];
      if (ci == cj) {
        next.self_loop[ci] += w;
      } else {
        between[{std::min(ci, cj), std::max(ci, cj)}] += w;
      }
    }
  }
  for (auto [key, w] : between) {
    next.adjacency[key.first].push_back({key.second, w});
    next.adjacency[key.second].push_back({key.first, w});
  }
  return next;
}

}  // namespace detail

// Multilevel (Louvain) modularity maximization. The seed fixes the vertex scan order.
inline CommunityAssignment detect_multilevel(const Graph& g, std::uint64_t seed) {
  if (g.num_vertices() == 0) throw ParameterError("community detection needs at least one vertex");
  std::vector<std::size_t> membership(g.num_vertices());
  std::iota(membership.begin(), membership.end(), 0);
  if (g.num_edges() == 0) return CommunityAssignment(g, std::move(membership));

  std::mt19937_64 rng(seed);
  auto level = detail::level_from_graph(g);
  const double total_strength = 2.0 * static_cast<double>(g.num_edges());
  while (true) {
    std::vector<std::size_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);
    if (!detail::louvain_local_moves(level, total_strength, rng, comm)) break;
    const auto k = detail::compact_ids(comm);
    for (auto& c : membership) c = comm[c];
    if (k == level.size()) break;
    level = detail::contract(level, comm, k);
  }
  return CommunityAssignment(g, std::move(membership));
}

// Incrementally maintained boundary and community sizes under single-vertex moves.
class BoundaryTracker {
 public:
  BoundaryTracker(const Graph& g, const CommunityAssignment& ca)
      : graph_(&g), membership_(ca.membership()), size_(ca.num_communities(), 0), cross_(g.num_vertices(), 0) {
    for (auto c : membership_) ++size_[c];
    for (const auto& e : g.edges()) {
      if (membership_[e.u] != membership_[e.v]) {
        ++cross_[e.u];
        ++cross_[e.v];
      }
    }
    for (auto x : cross_) boundary_ += (x > 0);
  }

  std::size_t boundary_size() const noexcept { return boundary_; }
  std::size_t community_size(std::size_t c) const { return size_.at(c); }
  std::size_t num_community_ids() const noexcept { return size_.size(); }
  bool is_boundary(std::size_t v) const { return cross_.at(v) > 0; }
  const std::vector<std::size_t>& membership() const noexcept { return membership_; }

  std::size_t largest_community() const noexcept { return *std::max_element(size_.begin(), size_.end()); }
  std::size_t score() const noexcept { return std::max(boundary_, largest_community()); }

  // |B| after moving v to community c, without applying the move.
  std::size_t boundary_if_moved(std::size_t v, std::size_t c) const {
    const auto from = membership_[v];
    if (c == from) return boundary_;
    std::size_t b = boundary_ - (cross_[v] > 0);
    std::size_t cross_v = 0;
    for (auto u : graph_->neighbors(v)) {
      const auto cu = membership_[u];
      if (cu != c) ++cross_v;
      if (cu == from && cross_[u] == 0) ++b;
      if (cu == c && cross_[u] == 1) --b;
    }
    return b + (cross_v > 0);
  }

  std::size_t score_if_moved(std::size_t v, std::size_t c) const {
    const auto from = membership_[v];
    std::size_t largest = 0;
    for (std::size_t d = 0; d < size_.size(); ++d) {
      std::size_t s = size_[d];
      if (d == from && d != c) --s;
      if (d == c && d != from) ++s;
      largest = std::max(largest, s);
    }
    return std::max(boundary_if_moved(v, c), largest);
  }

  void move(std::size_t v, std::size_t c) {
    const auto from = membership_.at(v);
    if (c == from) return;
    if (c >= size_.size()) throw ParameterError("unknown community id " + std::to_string(c));
    boundary_ = boundary_if_moved(v, c);
    std::size_t cross_v = 0;
    for (auto u : graph_->neighbors(v)) {
      const auto cu = membership_[u];
      if (cu != c) ++cross_v;
      if (cu == from) ++cross_[u];
      if (cu == c) --cross_[u];
    }
    cross_[v] = cross_v;
    membership_[v] = c;
    --size_[from];
    ++size_[c];
  }

 private:
  const Graph* graph_;
  std::vector<std::size_t> membership_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> cross_;  // neighbours in a different community
  std::size_t boundary_ = 0;
};

// Local search on g(C): single-vertex relabels to an existing (non-empty) community,
// first strictly improving move accepted, vertices scanned in a seeded order reshuffled
// every pass. Stops when no single relabel decreases g.
inline CommunityAssignment refine_boundary(const Graph& g, const CommunityAssignment& ca, std::uint64_t seed = 0) {
  if (ca.num_vertices() != g.num_vertices()) throw DimensionError("community assignment does not match graph");
  if (g.num_vertices() == 0) return ca;
  BoundaryTracker tracker(g, ca);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  const auto k = tracker.num_community_ids();

  bool improved = true;
  while (improved) {
    improved = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto v : order) {
      const auto current = tracker.score();
      const auto home = tracker.membership()[v];
      for (std::size_t c = 0; c < k; ++c) {
        if (c == home || tracker.community_size(c) == 0) continue;
        if (tracker.score_if_moved(v, c) < current) {
          tracker.move(v, c);
          improved = true;
          break;
        }
      }
    }
  }
  return CommunityAssignment(g, tracker.membership());
}

}  // namespace dnc
