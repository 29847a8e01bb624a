#pragma once

// Spin assignments and sparse pseudo-boolean polynomials over spins s_i in {+1, -1}.
//
// Bitmask convention, used project-wide: bit i of a mask is 0 when spin i is +1
// and 1 when spin i is -1, so the all-plus assignment is mask 0.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnc/error.hpp"

namespace dnc {

using Var = std::uint32_t;
using VarSet = std::vector<Var>;
using Mask = std::uint64_t;

inline constexpr Mask bit(std::size_t i) { return Mask{1} << i; }

class SpinAssignment {
 public:
  SpinAssignment() = default;

  // All spins +1.
  explicit SpinAssignment(std::size_t n) : values_(n, 1) {}

  explicit SpinAssignment(std::vector<int> values) {
    values_.reserve(values.size());
    for (int v : values) {
      if (v != 1 && v != -1) throw ParameterError("spin values must be +1 or -1");
      values_.push_back(static_cast<std::int8_t>(v));
    }
  }

  SpinAssignment(std::initializer_list<int> values) : SpinAssignment(std::vector<int>(values)) {}

  static SpinAssignment from_mask(std::size_t n, Mask mask) {
    if (n > 64) throw DimensionError("mask decoding supports at most 64 spins");
    SpinAssignment s(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & bit(i)) s.values_[i] = -1;
    }
    return s;
  }

  Mask to_mask() const {
    if (values_.size() > 64) throw DimensionError("mask encoding supports at most 64 spins");
    Mask m = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] < 0) m |= bit(i);
    }
    return m;
  }

  std::size_t size() const noexcept { return values_.size(); }
  int operator[](std::size_t i) const noexcept { return values_[i]; }

  void set(std::size_t i, int v) {
    if (v != 1 && v != -1) throw ParameterError("spin values must be +1 or -1");
    values_.at(i) = static_cast<std::int8_t>(v);
  }

  SpinAssignment flipped() const {
    SpinAssignment s = *this;
    for (auto& v : s.values_) v = static_cast<std::int8_t>(-v);
    return s;
  }

  std::vector<int> to_vector() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const SpinAssignment&, const SpinAssignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

// Sparse multilinear polynomial in spins: sum over index sets of coeff * prod s_i.
// Terms are kept canonical: index sets strictly sorted, no exact-zero coefficients,
// lexicographic order (the empty set, i.e. the constant, comes first).
class PuboPolynomial {
 public:
  using TermMap = std::map<VarSet, double>;

  explicit PuboPolynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  std::size_t num_vars() const noexcept { return num_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  // Adds coeff * prod_{i in vars} s_i. Indices may be unsorted or repeated;
  // since s_i^2 = 1, repeated indices cancel in pairs.
  void add_term(std::vector<std::size_t> vars, double coeff) {
    std::sort(vars.begin(), vars.end());
    VarSet canon;
    canon.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size();) {
      std::size_t j = i;
      while (j < vars.size() && vars[j] == vars[i]) ++j;
      if ((j - i) % 2 == 1) {
        if (vars[i] >= num_vars_) {
          throw DimensionError("variable index " + std::to_string(vars[i]) +
                               " out of range for " + std::to_string(num_vars_) + " variables");
        }
        canon.push_back(static_cast<Var>(vars[i]));
      }
      i = j;
    }
    add_canonical(std::move(canon), coeff);
  }

  void add_term(std::initializer_list<std::size_t> vars, double coeff) {
    add_term(std::vector<std::size_t>(vars), coeff);
  }

  void add_constant(double c) { add_canonical({}, c); }

  // Caller guarantees `vars` is strictly increasing and in range.
  void add_canonical(VarSet vars, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(vars), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double coefficient(const VarSet& vars) const {
    auto it = terms_.find(vars);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double constant() const { return coefficient({}); }

  std::size_t degree() const noexcept {
    std::size_t d = 0;
    for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
    return d;
  }

  PuboPolynomial& operator+=(const PuboPolynomial& other) {
    if (other.num_vars_ != num_vars_) throw DimensionError("adding polynomials over different variable counts");
    for (const auto& [vars, c] : other.terms_) add_canonical(vars, c);
    return *this;
  }

  // Drops terms with |coeff| < eps.
  void prune(double eps) {
    std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) < eps; });
  }

  // Renames variable i to mapping[i] in a polynomial over `new_num_vars` variables.
  PuboPolynomial remapped(std::size_t new_num_vars, std::span<const std::size_t> mapping) const {
    if (mapping.size() != num_vars_) throw DimensionError("variable mapping has wrong length");
    PuboPolynomial out(new_num_vars);
    std::vector<std::size_t> vars;
    for (const auto& [term, c] : terms_) {
      vars.clear();
      for (Var v : term) vars.push_back(mapping[v]);
      out.add_term(vars, c);
    }
    return out;
  }

  friend bool operator==(const PuboPolynomial&, const PuboPolynomial&) = default;

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;
};

inline double evaluate(const PuboPolynomial& poly, const SpinAssignment& s) {
  if (s.size() != poly.num_vars()) {
    throw DimensionError("assignment has " + std::to_string(s.size()) + " spins, polynomial has " +
                         std::to_string(poly.num_vars()) + " variables");
  }
  double e = 0.0;
  for (const auto& [vars, c] : poly.terms()) {
    int sign = 1;
    for (Var v : vars) sign *= s[v];
    e += sign * c;
  }
  return e;
}

// Same as evaluate() on SpinAssignment::from_mask(num_vars, mask); num_vars <= 64.
inline double evaluate_mask(const PuboPolynomial& poly, Mask mask) {
  double e = 0.0;
  for (const auto& [vars, c] : poly.terms()) {
    Mask tm = 0;
    for (Var v : vars) tm |= bit(v);
    e += (std::popcount(mask & tm) & 1) ? -c : c;
  }
  return e;
}

// Fixes some spins and returns the polynomial in the remaining ones.
// values[i] is +1 or -1 to fix spin i, 0 to keep it free; free spins are
// renumbered in increasing order of their original index.
inline PuboPolynomial fix_spins(const PuboPolynomial& poly, std::span<const int> values) {
  if (values.size() != poly.num_vars()) throw DimensionError("fix_spins: value vector has wrong length");
  std::vector<Var> new_index(values.size(), 0);
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) new_index[i] = static_cast<Var>(free_count++);
  }
  PuboPolynomial out(free_count);
  VarSet kept;
  for (const auto& [vars, c] : poly.terms()) {
    kept.clear();
    int sign = 1;
    for (Var v : vars) {
      if (values[v] == 0) {
        kept.push_back(new_index[v]);
      } else {
        sign *= values[v];
      }
    }
    out.add_canonical(kept, sign * c);
  }
  return out;
}

}  // namespace dnc
