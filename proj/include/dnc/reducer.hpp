#pragma once

// Divide-and-conquer reduction of a QUBO to a PUBO over boundary spins only.
//
// The energy is split into one intra-community polynomial per community (all linear
// terms and the quadratic terms with both endpoints inside) plus an across-community
// part (the constant and the quadratic terms joining two communities). Each community's
// core spins are then eliminated:
//
//   exact mode:      e_c(b_c) = min over cores of E_c(b_c, t_c), tabulated for all 2^|B_c|
//                    boundary masks and turned into a polynomial by Walsh-Hadamard transform;
//   core-fixed mode: the community is solved once without constraints and its cores are
//                    frozen to that optimum, so the reduced instance stays quadratic.
//
// The exact reduction has the same ground-state energy as the input; the core-fixed one
// gives an upper bound.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnc/brute_force.hpp"
#include "dnc/community.hpp"
#include "dnc/error.hpp"
#include "dnc/io.hpp"
#include "dnc/parallel.hpp"
#include "dnc/polynomial.hpp"
#include "dnc/walsh_hadamard.hpp"

namespace dnc {

struct ReducerOptions {
  std::size_t max_boundary = 24;  // cap on |B_c| for quench tables
  std::size_t jobs = 1;           // threads used across boundary masks
};

// One community's share of the energy, over local variables: boundary spins first
// (local 0..|B_c|-1), then core spins.
struct CommunitySubinstance {
  std::size_t community = 0;
  std::vector<std::size_t> boundary_vars;
  std::vector<std::size_t> core_vars;
  PuboPolynomial intra_poly;

  std::size_t num_boundary() const noexcept { return boundary_vars.size(); }
  std::size_t num_core() const noexcept { return core_vars.size(); }
};

struct EnergySplit {
  std::vector<CommunitySubinstance> communities;
  PuboPolynomial across;  // over the original variables; touches boundary spins only
};

inline EnergySplit split_energy(const PuboPolynomial& poly, const CommunityAssignment& ca) {
  if (poly.degree() > 2) {
    throw UnsupportedDegreeError("divide-and-conquer input must be quadratic, got degree " +
                                 std::to_string(poly.degree()));
  }
  if (ca.num_vertices() != poly.num_vars()) {
    throw DimensionError("community assignment covers " + std::to_string(ca.num_vertices()) +
                         " vertices, polynomial has " + std::to_string(poly.num_vars()) + " variables");
  }
  EnergySplit split;
  split.across = PuboPolynomial(poly.num_vars());
  std::vector<std::size_t> local(poly.num_vars());
  split.communities.resize(ca.num_communities());
  for (std::size_t c = 0; c < ca.num_communities(); ++c) {
    auto& sub = split.communities[c];
    sub.community = c;
    sub.boundary_vars = ca.boundary_of(c);
    sub.core_vars = ca.core_of(c);
    sub.intra_poly = PuboPolynomial(sub.num_boundary() + sub.num_core());
    for (std::size_t i = 0; i < sub.num_boundary(); ++i) local[sub.boundary_vars[i]] = i;
    for (std::size_t j = 0; j < sub.num_core(); ++j) local[sub.core_vars[j]] = sub.num_boundary() + j;
  }
  for (const auto& [vars, c] : poly.terms()) {
    if (vars.empty()) {
      split.across.add_canonical(vars, c);
      continue;
    }
    const auto home = ca.community_of(vars[0]);
    if (vars.size() == 1) {
      split.communities[home].intra_poly.add_term({local[vars[0]]}, c);
    } else if (ca.community_of(vars[1]) == home) {
      split.communities[home].intra_poly.add_term({local[vars[0]], local[vars[1]]}, c);
    } else {
      if (!ca.is_boundary(vars[0]) || !ca.is_boundary(vars[1])) {
        throw DimensionError("community assignment was not computed on this polynomial's interaction graph: "
                             "term (" + std::to_string(vars[0]) + ", " + std::to_string(vars[1]) +
                             ") crosses communities between non-boundary spins");
      }
      split.across.add_canonical(vars, c);
    }
  }
  return split;
}

// Minimized intra-community energies for every boundary mask, indexed with the
// project convention (bit i set <=> local boundary spin i = -1).
struct QuenchTable {
  std::size_t community = 0;
  std::vector<double> energies;
  std::vector<Mask> argmin_cores;  // core bit j set <=> core spin j = -1
};

inline QuenchTable quench(const CommunitySubinstance& sub, const ExactSolver& core_solver,
                          const ReducerOptions& opts = {}) {
  const auto nb = sub.num_boundary();
  if (nb > opts.max_boundary) {
    throw ResourceError("community " + std::to_string(sub.community) + " has |B_c| = " + std::to_string(nb) +
                        ", above the boundary cap of " + std::to_string(opts.max_boundary));
  }
  const std::size_t d = std::size_t{1} << nb;
  QuenchTable table;
  table.community = sub.community;
  table.energies.resize(d);
  table.argmin_cores.resize(d);
  parallel_for(d, opts.jobs, [&](std::size_t m) {
    std::vector<int> fixed(sub.intra_poly.num_vars(), 0);
    for (std::size_t i = 0; i < nb; ++i) fixed[i] = (m & bit(i)) ? -1 : 1;
    const Solution s = core_solver(fix_spins(sub.intra_poly, fixed));
    table.energies[m] = s.energy;
    table.argmin_cores[m] = s.mask;
  });
  return table;
}

inline PuboPolynomial table_to_polynomial(const QuenchTable& t) { return table_to_polynomial(t.energies); }

inline std::vector<QuenchTable> quench_all(const EnergySplit& split, const ExactSolver& core_solver,
                                           const ReducerOptions& opts = {}) {
  std::vector<QuenchTable> tables;
  tables.reserve(split.communities.size());
  for (const auto& sub : split.communities) tables.push_back(quench(sub, core_solver, opts));
  return tables;
}

// Core-fixed mode: optimal core mask of each community solved without constraints.
// Among degenerate optima the lowest full-community mask wins.
inline std::vector<Mask> solve_communities(const EnergySplit& split, const ExactSolver& solver) {
  std::vector<Mask> cores;
  cores.reserve(split.communities.size());
  for (const auto& sub : split.communities) {
    const Solution s = solver(sub.intra_poly);
    cores.push_back(s.mask >> sub.num_boundary());
  }
  return cores;
}

enum class ReductionMode { exact, core_fixed };

inline const char* to_string(ReductionMode m) { return m == ReductionMode::exact ? "exact" : "core-fixed"; }

inline ReductionMode parse_reduction_mode(const std::string& s) {
  if (s == "exact") return ReductionMode::exact;
  if (s == "core-fixed") return ReductionMode::core_fixed;
  throw ParameterError("unknown reduction mode '" + s + "' (expected exact or core-fixed)");
}

struct CommunityReduction {
  CommunitySubinstance sub;
  QuenchTable table;     // exact mode
  Mask fixed_core = 0;   // core-fixed mode
};

struct ReducedInstance {
  PuboPolynomial poly;                // over |B| reduced variables
  std::vector<std::size_t> var_map;   // reduced index -> original index (ascending)
  std::size_t original_num_vars = 0;
  ReductionMode mode = ReductionMode::exact;
  std::vector<CommunityReduction> communities;
  PuboPolynomial across;              // over the original variables
  ExactSolver core_solver;            // re-used when lifting core-fixed solutions

  std::size_t num_vars() const noexcept { return var_map.size(); }
};

namespace detail {

inline std::vector<std::size_t> reduced_index_map(std::size_t n, const std::vector<std::size_t>& var_map) {
  std::vector<std::size_t> idx(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t r = 0; r < var_map.size(); ++r) idx[var_map[r]] = r;
  return idx;
}

inline ReducedInstance start_reduced(EnergySplit& split, const CommunityAssignment& ca, ReductionMode mode,
                                     ExactSolver solver) {
  ReducedInstance ri;
  ri.var_map = ca.global_boundary();
  ri.original_num_vars = ca.num_vertices();
  ri.mode = mode;
  ri.core_solver = std::move(solver);
  ri.poly = PuboPolynomial(ri.var_map.size());
  const auto idx = reduced_index_map(ri.original_num_vars, ri.var_map);
  // Non-boundary entries of idx are never referenced by across terms.
  std::vector<std::size_t> mapping(ri.original_num_vars, 0);
  for (std::size_t v = 0; v < mapping.size(); ++v) {
    if (idx[v] != std::numeric_limits<std::size_t>::max()) mapping[v] = idx[v];
  }
  ri.poly += split.across.remapped(ri.var_map.size(), mapping);
  ri.across = std::move(split.across);
  return ri;
}

inline std::vector<std::size_t> boundary_to_reduced(const CommunitySubinstance& sub,
                                                    const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> m(sub.num_boundary());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = idx[sub.boundary_vars[i]];
  return m;
}

}  // namespace detail

inline ReducedInstance assemble_exact(EnergySplit split, std::vector<QuenchTable> tables,
                                      const CommunityAssignment& ca, ExactSolver core_solver) {
  if (tables.size() != split.communities.size()) throw DimensionError("one quench table per community expected");
  ReducedInstance ri = detail::start_reduced(split, ca, ReductionMode::exact, std::move(core_solver));
  const auto idx = detail::reduced_index_map(ri.original_num_vars, ri.var_map);
  for (std::size_t c = 0; c < tables.size(); ++c) {
    auto& sub = split.communities[c];
    const PuboPolynomial local = table_to_polynomial(tables[c]);
    ri.poly += local.remapped(ri.num_vars(), detail::boundary_to_reduced(sub, idx));
    ri.communities.push_back({std::move(sub), std::move(tables[c]), 0});
  }
  return ri;
}

inline ReducedInstance assemble_core_fixed(EnergySplit split, const std::vector<Mask>& fixed_cores,
                                           const CommunityAssignment& ca, ExactSolver core_solver) {
  if (fixed_cores.size() != split.communities.size()) throw DimensionError("one core mask per community expected");
  ReducedInstance ri = detail::start_reduced(split, ca, ReductionMode::core_fixed, std::move(core_solver));
  const auto idx = detail::reduced_index_map(ri.original_num_vars, ri.var_map);
  for (std::size_t c = 0; c < fixed_cores.size(); ++c) {
    auto& sub = split.communities[c];
    std::vector<int> fixed(sub.intra_poly.num_vars(), 0);
    for (std::size_t j = 0; j < sub.num_core(); ++j) {
      fixed[sub.num_boundary() + j] = (fixed_cores[c] & bit(j)) ? -1 : 1;
    }
    const PuboPolynomial local = fix_spins(sub.intra_poly, fixed);
    ri.poly += local.remapped(ri.num_vars(), detail::boundary_to_reduced(sub, idx));
    ri.communities.push_back({std::move(sub), QuenchTable{}, fixed_cores[c]});
  }
  return ri;
}

inline ReducedInstance reduce_exact(const PuboPolynomial& poly, const CommunityAssignment& ca,
                                    const ExactSolver& core_solver = brute_force_solver(),
                                    const ReducerOptions& opts = {}) {
  auto split = split_energy(poly, ca);
  auto tables = quench_all(split, core_solver, opts);
  return assemble_exact(std::move(split), std::move(tables), ca, core_solver);
}

inline ReducedInstance reduce_core_fixed(const PuboPolynomial& poly, const CommunityAssignment& ca,
                                         const ExactSolver& core_solver = brute_force_solver()) {
  auto split = split_energy(poly, ca);
  const auto cores = solve_communities(split, core_solver);
  return assemble_core_fixed(std::move(split), cores, ca, core_solver);
}

// Boundary mask of community `sub` under a reduced assignment.
inline Mask community_boundary_mask(const ReducedInstance& ri, const CommunitySubinstance& sub,
                                    const SpinAssignment& b) {
  Mask m = 0;
  std::size_t i = 0;
  for (auto v : sub.boundary_vars) {
    const auto r = static_cast<std::size_t>(std::lower_bound(ri.var_map.begin(), ri.var_map.end(), v) -
                                            ri.var_map.begin());
    if (b[r] < 0) m |= bit(i);
    ++i;
  }
  return m;
}

// Extends an assignment of the reduced (boundary) variables to all original variables.
// Exact mode reads each community's optimal core from its quench table; core-fixed mode
// re-minimizes every community's cores with its boundary held at `b`.
inline SpinAssignment lift_solution(const ReducedInstance& ri, const SpinAssignment& b) {
  if (b.size() != ri.num_vars()) {
    throw DimensionError("reduced assignment has " + std::to_string(b.size()) + " spins, instance has " +
                         std::to_string(ri.num_vars()));
  }
  SpinAssignment full(ri.original_num_vars);
  for (std::size_t r = 0; r < ri.num_vars(); ++r) full.set(ri.var_map[r], b[r]);
  for (const auto& cr : ri.communities) {
    const auto& sub = cr.sub;
    const Mask bm = community_boundary_mask(ri, sub, b);
    Mask core = 0;
    if (ri.mode == ReductionMode::exact) {
      core = cr.table.argmin_cores.at(bm);
    } else {
      std::vector<int> fixed(sub.intra_poly.num_vars(), 0);
      for (std::size_t i = 0; i < sub.num_boundary(); ++i) fixed[i] = (bm & bit(i)) ? -1 : 1;
      core = ri.core_solver(fix_spins(sub.intra_poly, fixed)).mask;
    }
    for (std::size_t j = 0; j < sub.num_core(); ++j) full.set(sub.core_vars[j], (core & bit(j)) ? -1 : 1);
  }
  return full;
}

// Number of terms of each degree (index = degree).
inline std::vector<std::size_t> degree_histogram(const PuboPolynomial& poly) {
  std::vector<std::size_t> h(poly.degree() + 1, 0);
  for (const auto& [vars, c] : poly.terms()) ++h[vars.size()];
  return h;
}

// Polynomial JSON plus the reduced-to-original variable map and the mode tag.
inline nlohmann::json reduced_to_json(const ReducedInstance& ri) {
  auto j = polynomial_to_json(ri.poly);
  j["var_map"] = ri.var_map;
  j["mode"] = to_string(ri.mode);
  j["original_num_vars"] = ri.original_num_vars;
  return j;
}

}  // namespace dnc
