#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dnc/generators.hpp"
#include "dnc/wcnf.hpp"
#include "oracles.hpp"

using namespace dnc;

namespace {

std::set<std::vector<int>> clause_set(const WcnfInstance& w) {
  std::set<std::vector<int>> s;
  for (const auto& c : w.clauses) {
    auto lits = c.literals;
    std::sort(lits.begin(), lits.end());
    s.insert(lits);
  }
  return s;
}

std::size_t expected_clauses(const PuboPolynomial& p) {
  std::size_t n = 0;
  for (const auto& [vars, c] : p.terms()) {
    if (!vars.empty()) n += std::size_t{1} << (vars.size() - 1);
  }
  return n;
}

}  // namespace

// With the maximization convention the clause patterns are those of the worked
// two- and three-body examples.
TEST(PuboToWcnf, TwoBodyTermMaximize) {
  PuboPolynomial p(2);
  p.add_term({0, 1}, 1.0);
  const auto w = pubo_to_wcnf(p, Sense::maximize);
  ASSERT_EQ(w.clauses.size(), 2u);
  EXPECT_EQ(clause_set(w), (std::set<std::vector<int>>{{-2, 1}, {-1, 2}}));
  for (const auto& c : w.clauses) EXPECT_EQ(c.weight, 2);
  EXPECT_EQ(w.scaled_offset, -3);
  // sat + offset == E for every assignment
  for (Mask m = 0; m < 4; ++m) {
    const auto s = SpinAssignment::from_mask(2, m);
    EXPECT_EQ(satisfied_weight(w, s) + w.scaled_offset, evaluate(p, s));
  }
}

TEST(PuboToWcnf, ThreeBodyTermMaximize) {
  PuboPolynomial p(3);
  p.add_term({0, 1, 2}, 1.0);
  const auto w = pubo_to_wcnf(p, Sense::maximize);
  EXPECT_EQ(clause_set(w), (std::set<std::vector<int>>{{1, 2, 3}, {-2, -1, 3}, {-3, -1, 2}, {-3, -2, 1}}));
}

TEST(PuboToWcnf, RoundTripReproducesMinusEnergy) {
  std::mt19937_64 rng(1);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + inst % 12;
    const auto p = oracle::random_pubo(n, std::min<std::size_t>(4, n), 3 * n, 3, rng);
    const auto w = pubo_to_wcnf(p);
    ASSERT_EQ(w.scale, 1);
    ASSERT_EQ(w.clauses.size(), expected_clauses(p));
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      const auto s = SpinAssignment::from_mask(n, m);
      ASSERT_EQ(satisfied_weight(w, s) + w.scaled_offset, -static_cast<std::int64_t>(evaluate(p, s)));
      ASSERT_EQ(energy_from_weight(w, satisfied_weight(w, s)), evaluate(p, s));
    }
  }
}

TEST(PuboToWcnf, ArgmaxEqualsArgmin) {
  std::mt19937_64 rng(2);
  for (int inst = 0; inst < 20; ++inst) {
    const auto p = oracle::random_pubo(8, 4, 20, 3, rng);
    const auto w = pubo_to_wcnf(p);
    std::int64_t best_w = -1;
    double best_e = 1e300;
    std::set<Mask> argmax, argmin;
    for (Mask m = 0; m < 256; ++m) {
      const auto s = SpinAssignment::from_mask(8, m);
      const auto sw = satisfied_weight(w, s);
      const auto e = evaluate(p, s);
      if (sw > best_w) argmax.clear(), best_w = sw;
      if (sw == best_w) argmax.insert(m);
      if (e < best_e) argmin.clear(), best_e = e;
      if (e == best_e) argmin.insert(m);
    }
    EXPECT_EQ(argmax, argmin);
  }
}

TEST(PuboToWcnf, ClauseInvariants) {
  std::mt19937_64 rng(3);
  const auto p = oracle::random_pubo(10, 4, 40, 3, rng);
  const auto w = pubo_to_wcnf(p);
  for (const auto& c : w.clauses) {
    EXPECT_GT(c.weight, 0);
    std::set<int> vars;
    for (int lit : c.literals) {
      EXPECT_NE(lit, 0);
      EXPECT_TRUE(vars.insert(std::abs(lit)).second);
    }
  }
}

TEST(PuboToWcnf, MaxCutScaleIsTwo) {
  const auto p = maxcut_to_qubo(random_regular(10, 3, 1));
  const auto w = pubo_to_wcnf(p);
  EXPECT_EQ(w.scale, 2);
  EXPECT_EQ(w.clauses.size(), 15u * 2u);
  for (Mask m = 0; m < 1024; m += 7) {
    const auto s = SpinAssignment::from_mask(10, m);
    EXPECT_EQ(energy_from_weight(w, satisfied_weight(w, s)), evaluate(p, s));
  }
}

TEST(PuboToWcnf, ConstantOnly) {
  PuboPolynomial p(3);
  p.add_constant(-4.5);
  const auto w = pubo_to_wcnf(p);
  EXPECT_TRUE(w.clauses.empty());
  EXPECT_EQ(w.offset(), 4.5);
  EXPECT_EQ(write_wcnf(w), "p wcnf 3 0 1\n");
}

TEST(PuboToWcnf, IrrationalCoefficientThrows) {
  PuboPolynomial p(2);
  p.add_term({0, 1}, std::sqrt(2.0));
  EXPECT_THROW(pubo_to_wcnf(p), Error);
}

TEST(WriteWcnf, TwoBodyExampleFormat) {
  PuboPolynomial p(2);
  p.add_term({0, 1}, 1.0);
  EXPECT_EQ(write_wcnf(pubo_to_wcnf(p, Sense::maximize)), "p wcnf 2 2 5\n2 1 -2 0\n2 -1 2 0\n");
}

TEST(WriteWcnf, ParserIdentity) {
  std::mt19937_64 rng(4);
  const auto p = oracle::random_pubo(9, 4, 30, 3, rng);
  const auto w = pubo_to_wcnf(p);
  const auto text = write_wcnf(w);
  const auto back = parse_wcnf(text);
  EXPECT_EQ(back.num_vars, w.num_vars);
  EXPECT_EQ(back.clauses, w.clauses);
  EXPECT_EQ(write_wcnf(back), text);
}

TEST(ParseWcnf, RejectsBadInput) {
  EXPECT_THROW(parse_wcnf("1 1 0\n"), IoError);
  EXPECT_THROW(parse_wcnf("p wcnf 2 2 5\n2 1 0\n"), IoError);
  EXPECT_NO_THROW(parse_wcnf("c comment\np wcnf 2 1 3\n2 1 -2 0\n"));
}
