#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/polynomial.hpp"

namespace dnc {

struct Solution {
  double energy = 0.0;
  SpinAssignment assignment;
  Mask mask = 0;
};

// Exact PUBO minimizer used for cores, quench tables and as ground-truth oracle.
using ExactSolver = std::function<Solution(const PuboPolynomial&)>;

inline constexpr std::size_t kBruteForceMaxVars = 30;

// Tie order among equal minima: the lexicographically first spin vector, reading s_0
// first and taking +1 before -1. In mask terms: a precedes b when the lowest bit in which
// they differ is clear in a.
inline bool precedes(Mask a, Mask b) noexcept {
  const Mask diff = a ^ b;
  return diff != 0 && (a & diff & (~diff + 1)) == 0;
}

// Exhaustive minimization over all 2^n assignments by Gray-code enumeration: each step
// flips one spin and updates only the terms containing it. The reported energy is
// re-evaluated directly at the winner.
inline Solution brute_force_min(const PuboPolynomial& poly, std::size_t max_vars = kBruteForceMaxVars) {
  const std::size_t n = poly.num_vars();
  if (n > max_vars) {
    throw ResourceError("brute force limited to " + std::to_string(max_vars) + " variables, got " + std::to_string(n));
  }
  std::vector<double> value;
  std::vector<std::vector<std::size_t>> terms_of(n);
  double energy = 0.0;
  for (const auto& [vars, c] : poly.terms()) {
    energy += c;
    if (vars.empty()) continue;
    for (Var v : vars) terms_of[v].push_back(value.size());
    value.push_back(c);
  }

  double best = energy;
  Mask best_mask = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < count; ++step) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(step));
    for (auto t : terms_of[flip]) {
      energy -= 2.0 * value[t];
      value[t] = -value[t];
    }
    const Mask mask = step ^ (step >> 1);
    if (energy < best || (energy == best && precedes(mask, best_mask))) {
      best = energy;
      best_mask = mask;
    }
  }
  Solution s;
  s.mask = best_mask;
  s.assignment = SpinAssignment::from_mask(n, best_mask);
  s.energy = evaluate(poly, s.assignment);
  return s;
}

inline ExactSolver brute_force_solver(std::size_t max_vars = kBruteForceMaxVars) {
  return [max_vars](const PuboPolynomial& p) { return brute_force_min(p, max_vars); };
}

}  // namespace dnc
