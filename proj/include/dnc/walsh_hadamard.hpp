#pragma once

// Conversion between value tables over 2^M spin assignments and multilinear spin
// polynomials, via the fast Walsh-Hadamard transform.
//
// With the project mask convention (bit i set <=> spin i = -1), the polynomial
//   P(b) = sum_t f(t) prod_{i in t} b_i
// takes value table[m] = sum_t f(t) (-1)^{popcount(t & m)}, so
//   f(t) = 2^{-M} sum_m table[m] (-1)^{popcount(t & m)}.

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/polynomial.hpp"

namespace dnc {

// In-place unnormalized Walsh-Hadamard transform, O(d log d). Applying it twice
// multiplies the input by d.
template <typename T>
void fwht(std::span<T> a) {
  const std::size_t d = a.size();
  if (!std::has_single_bit(d)) throw DimensionError("Walsh-Hadamard length " + std::to_string(d) + " is not a power of two");
  for (std::size_t h = 1; h < d; h <<= 1) {
    for (std::size_t i = 0; i < d; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = a[j];
        const T y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

inline constexpr double kWhtPruneThreshold = 1e-9;

// Unique multilinear polynomial in M = log2(d) spins reproducing `table` at every mask.
// Coefficients smaller than `prune` in magnitude are dropped.
inline PuboPolynomial table_to_polynomial(std::span<const double> table, double prune = kWhtPruneThreshold) {
  const std::size_t d = table.size();
  if (!std::has_single_bit(d)) throw DimensionError("table length " + std::to_string(d) + " is not a power of two");
  const std::size_t m = static_cast<std::size_t>(std::countr_zero(d));
  std::vector<double> f(table.begin(), table.end());
  fwht(std::span<double>(f));
  const double scale = std::ldexp(1.0, -static_cast<int>(m));
  PuboPolynomial poly(m);
  VarSet vars;
  for (std::size_t t = 0; t < d; ++t) {
    const double c = f[t] * scale;
    if (std::abs(c) < prune) continue;
    vars.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (t & bit(i)) vars.push_back(static_cast<Var>(i));
    }
    poly.add_canonical(vars, c);
  }
  return poly;
}

// Values of `poly` at all 2^n masks, computed as the inverse transform of its coefficient
// array in O(n 2^n + terms).
inline std::vector<double> polynomial_to_table(const PuboPolynomial& poly) {
  const std::size_t n = poly.num_vars();
  if (n >= 63) throw ResourceError("polynomial_to_table: too many variables");
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (const auto& [vars, c] : poly.terms()) {
    Mask t = 0;
    for (Var v : vars) t |= bit(v);
    table[t] += c;
  }
  fwht(std::span<double>(table));
  return table;
}

}  // namespace dnc
