#pragma once

// PUBO -> weighted MaxSAT (DIMACS WCNF).
//
// SAT variable x_{i+1} is true iff spin s_i = +1. A k-body term c * s_1...s_k becomes
// 2^{k-1} clauses of k literals, one per spin pattern of the "wrong" parity: the clause
// built from pattern s has literal !x_j where s_j = +1 and x_j where s_j = -1, so it is
// falsified exactly by s. Each clause weighs 2|c| and the term adds -|c|(2^k - 1) to the
// offset, which makes (satisfied weight + offset) equal to c' * s_1...s_k, where
// c' = -c when minimizing the PUBO (maximizing satisfied weight) and c' = c otherwise.
// Clauses are kept for patterns with product -1 when c' > 0 and +1 when c' < 0, so all
// weights stay positive. Rational coefficients are scaled by their least common
// denominator to make every weight an integer:
//
//   satisfied_weight(x) + scaled_offset == scale * target(s),
//   target(s) = -E(s) (Sense::minimize)  or  E(s) (Sense::maximize).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/io.hpp"
#include "dnc/polynomial.hpp"

namespace dnc {

enum class Sense { minimize, maximize };

struct WcnfClause {
  std::int64_t weight = 0;
  std::vector<int> literals;

  friend bool operator==(const WcnfClause&, const WcnfClause&) = default;
};

struct WcnfInstance {
  std::size_t num_vars = 0;
  std::vector<WcnfClause> clauses;
  std::int64_t scale = 1;
  std::int64_t scaled_offset = 0;
  Sense sense = Sense::minimize;

  double offset() const noexcept { return static_cast<double>(scaled_offset) / static_cast<double>(scale); }

  std::int64_t total_weight() const noexcept {
    std::int64_t w = 0;
    for (const auto& c : clauses) w += c.weight;
    return w;
  }

  std::int64_t top() const noexcept { return 1 + total_weight(); }
};

namespace detail {

// Smallest denominator q <= max_den with |x - p/q| within tolerance, via continued fractions.
inline std::int64_t rational_denominator(double x, std::int64_t max_den = std::int64_t{1} << 20) {
  const double tol = 1e-15 * std::max(1.0, std::abs(x));
  double r = std::abs(x);
  std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(r));
  std::int64_t k0 = 0, k1 = 1;
  double frac = r - std::floor(r);
  while (std::abs(std::abs(x) - static_cast<double>(h1) / static_cast<double>(k1)) > tol) {
    if (frac == 0.0) break;
    r = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(r));
    frac = r - std::floor(r);
    const std::int64_t h2 = a * h1 + h0;
    const std::int64_t k2 = a * k1 + k0;
    if (k2 > max_den) throw ParameterError("coefficient " + format_real(x) + " is not a rational with small denominator");
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return k1;
}

inline std::int64_t scaled_integer(double c, std::int64_t scale) {
  const double x = c * static_cast<double>(scale);
  if (std::abs(x) > 9.0e15) throw ResourceError("scaled coefficient exceeds integer weight range");
  const auto r = static_cast<std::int64_t>(std::llround(x));
  if (std::abs(x - static_cast<double>(r)) > 1e-6 * std::max(1.0, std::abs(x))) {
    throw ParameterError("coefficient " + format_real(c) + " does not scale to an integer");
  }
  return r;
}

}  // namespace detail

// Least common denominator of all coefficients (the WCNF weight scale).
inline std::int64_t coefficient_scale(const PuboPolynomial& poly) {
  std::int64_t scale = 1;
  for (const auto& [vars, c] : poly.terms()) {
    scale = std::lcm(scale, detail::rational_denominator(c));
    if (scale > (std::int64_t{1} << 40)) throw ResourceError("coefficient scale exceeds 2^40");
  }
  return scale;
}

inline WcnfInstance pubo_to_wcnf(const PuboPolynomial& poly, Sense sense = Sense::minimize) {
  WcnfInstance w;
  w.num_vars = poly.num_vars();
  w.sense = sense;
  w.scale = coefficient_scale(poly);
  for (const auto& [vars, c] : poly.terms()) {
    const std::int64_t sc = detail::scaled_integer(c, w.scale);
    const std::int64_t target = sense == Sense::minimize ? -sc : sc;
    const std::size_t k = vars.size();
    if (k == 0) {
      w.scaled_offset += target;
      continue;
    }
    if (k > 30) throw ResourceError("term of degree " + std::to_string(k) + " is too large for clause expansion");
    const std::int64_t mag = std::abs(sc);
    const int keep_parity = target > 0 ? 1 : 0;  // 1: product -1 patterns, 0: product +1 patterns
    for (Mask pattern = 0; pattern < (Mask{1} << k); ++pattern) {
      if ((std::popcount(pattern) & 1) != keep_parity) continue;
      WcnfClause clause;
      clause.weight = 2 * mag;
      clause.literals.reserve(k);
      for (std::size_t j = 0; j < k; ++j) {
        const int lit = static_cast<int>(vars[j]) + 1;
        clause.literals.push_back((pattern & bit(j)) ? lit : -lit);
      }
      w.clauses.push_back(std::move(clause));
    }
    w.scaled_offset -= mag * ((std::int64_t{1} << k) - 1);
  }
  return w;
}

// Sum of weights of clauses satisfied by s (x_i true iff s_i = +1).
inline std::int64_t satisfied_weight(const WcnfInstance& w, const SpinAssignment& s) {
  if (s.size() != w.num_vars) throw DimensionError("assignment size differs from WCNF variable count");
  std::int64_t total = 0;
  for (const auto& clause : w.clauses) {
    for (int lit : clause.literals) {
      const bool x = s[static_cast<std::size_t>(std::abs(lit)) - 1] > 0;
      if ((lit > 0) == x) {
        total += clause.weight;
        break;
      }
    }
  }
  return total;
}

// PUBO energy corresponding to a satisfied-weight total.
inline double energy_from_weight(const WcnfInstance& w, std::int64_t satisfied) {
  const double target = static_cast<double>(satisfied + w.scaled_offset) / static_cast<double>(w.scale);
  return w.sense == Sense::minimize ? -target : target;
}

inline std::string write_wcnf(const WcnfInstance& w) {
  std::ostringstream os;
  os << "p wcnf " << w.num_vars << ' ' << w.clauses.size() << ' ' << w.top() << '\n';
  for (const auto& clause : w.clauses) {
    os << clause.weight;
    for (int lit : clause.literals) os << ' ' << lit;
    os << " 0\n";
  }
  return os.str();
}

inline void save_wcnf(const std::string& path, const WcnfInstance& w) {
  auto out = detail::open_out(path);
  out << write_wcnf(w);
  if (!out) throw IoError("write failed for '" + path + "'");
}

// Reads the clause section of a DIMACS WCNF file. Offset and scale are not part of the
// format and come back as 0 and 1.
inline WcnfInstance parse_wcnf(const std::string& text) {
  WcnfInstance w;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      std::int64_t top = 0;
      if (!(ls >> fmt >> w.num_vars >> expected) || fmt != "wcnf") throw IoError("malformed WCNF header '" + line + "'");
      ls >> top;
      have_header = true;
      continue;
    }
    if (!have_header) throw IoError("WCNF clause before header");
    WcnfClause clause;
    clause.weight = std::stoll(tok);
    int lit = 0;
    while (ls >> lit && lit != 0) {
      if (static_cast<std::size_t>(std::abs(lit)) > w.num_vars) throw IoError("literal out of range in '" + line + "'");
      clause.literals.push_back(lit);
    }
    if (lit != 0) throw IoError("clause line not terminated by 0: '" + line + "'");
    w.clauses.push_back(std::move(clause));
  }
  if (!have_header) throw IoError("missing WCNF header");
  if (w.clauses.size() != expected) throw IoError("WCNF header announces " + std::to_string(expected) + " clauses, found " +
                                                  std::to_string(w.clauses.size()));
  return w;
}

}  // namespace dnc
