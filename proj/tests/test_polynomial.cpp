#include <gtest/gtest.h>

#include <random>

#include "dnc/graph.hpp"
#include "dnc/polynomial.hpp"
#include "oracles.hpp"

using namespace dnc;

namespace {

Graph triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  return g;
}

}  // namespace

TEST(Evaluate, ConstantPolynomial) {
  PuboPolynomial p(3);
  p.add_constant(5.0);
  EXPECT_EQ(evaluate(p, SpinAssignment{1, -1, 1}), 5.0);
  EXPECT_EQ(evaluate(p, SpinAssignment{-1, -1, -1}), 5.0);
}

TEST(Evaluate, TriangleMaxCut) {
  const auto p = maxcut_to_qubo(triangle());
  EXPECT_EQ(evaluate(p, SpinAssignment{1, 1, 1}), 0.0);
  EXPECT_EQ(evaluate(p, SpinAssignment{1, 1, -1}), -2.0);
  double best = 0.0;
  for (Mask m = 0; m < 8; ++m) best = std::min(best, evaluate(p, SpinAssignment::from_mask(3, m)));
  EXPECT_EQ(best, -2.0);
}

TEST(Evaluate, LengthMismatchThrows) {
  PuboPolynomial p(3);
  EXPECT_THROW(evaluate(p, SpinAssignment{1, 1}), DimensionError);
}

TEST(Evaluate, MaskVariantAgrees) {
  std::mt19937_64 rng(3);
  const auto p = oracle::random_pubo(8, 4, 20, 3, rng);
  for (Mask m = 0; m < 256; ++m) EXPECT_EQ(evaluate_mask(p, m), evaluate(p, SpinAssignment::from_mask(8, m)));
}

TEST(SpinAssignment, RejectsNonSpinValues) { EXPECT_THROW(SpinAssignment({1, 0, -1}), ParameterError); }

TEST(SpinAssignment, MaskRoundTrip) {
  const SpinAssignment s{1, -1, -1, 1};
  EXPECT_EQ(s.to_mask(), Mask{0b0110});
  EXPECT_EQ(SpinAssignment::from_mask(4, s.to_mask()), s);
  EXPECT_EQ(s.flipped(), (SpinAssignment{-1, 1, 1, -1}));
}

TEST(MaxCutToQubo, Triangle) {
  const auto p = maxcut_to_qubo(triangle());
  EXPECT_EQ(p.num_terms(), 4u);
  EXPECT_EQ(p.constant(), -1.5);
  EXPECT_EQ(p.coefficient({0, 1}), 0.5);
  EXPECT_EQ(p.coefficient({0, 2}), 0.5);
  EXPECT_EQ(p.coefficient({1, 2}), 0.5);
  EXPECT_EQ(p.degree(), 2u);
}

TEST(MaxCutToQubo, SingleEdge) {
  Graph g(2);
  g.add_edge(0, 1);
  const auto p = maxcut_to_qubo(g);
  EXPECT_EQ(p.constant(), -0.5);
  EXPECT_EQ(p.coefficient({0, 1}), 0.5);
  EXPECT_EQ(oracle::naive_min(p).first, -1.0);
}

TEST(MaxCutToQubo, EmptyGraph) {
  const auto p = maxcut_to_qubo(Graph(5));
  EXPECT_TRUE(p.empty());
  EXPECT_EQ(p.num_vars(), 5u);
  EXPECT_EQ(p.degree(), 0u);
}

TEST(MaxCutToQubo, Weighted) {
  Graph g(3);
  g.add_edge(0, 1, 2.0);
  g.add_edge(1, 2, 3.0);
  const auto p = maxcut_to_qubo(g);
  EXPECT_EQ(p.constant(), -2.5);
  EXPECT_EQ(p.coefficient({0, 1}), 1.0);
  EXPECT_EQ(evaluate(p, SpinAssignment{1, -1, 1}), -5.0);
}

TEST(MaxCutToQubo, EnergyIsMinusCutExhaustive) {
  for (std::size_t n : {6u, 10u, 16u}) {
    std::mt19937_64 rng(n);
    Graph g(n);
    std::bernoulli_distribution coin(0.4);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (coin(rng)) g.add_edge(u, v);
      }
    }
    const auto p = maxcut_to_qubo(g);
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      const auto s = SpinAssignment::from_mask(n, m);
      const double e = evaluate_mask(p, m);
      ASSERT_EQ(e, -cut_weight(g, s)) << "n=" << n << " mask=" << m;
      ASSERT_EQ(e, evaluate_mask(p, m ^ ((Mask{1} << n) - 1)));
    }
  }
}

TEST(PuboPolynomial, CanonicalizationIgnoresOrderAndRepeats) {
  PuboPolynomial a(5), b(5);
  a.add_term({0, 2, 4}, 1.5);
  a.add_term({3, 1}, -2.0);
  a.add_term({}, 0.25);
  b.add_term({4, 0, 2}, 1.0);
  b.add_term({2, 4, 0}, 0.5);
  b.add_term({1, 3}, -2.0);
  b.add_term({2, 2}, 0.25);  // s_2^2 = 1
  EXPECT_EQ(a, b);
  const auto& terms = a.terms();
  EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end(),
                             [](const auto& x, const auto& y) { return x.first < y.first; }));
}

TEST(PuboPolynomial, ZeroCoefficientsAreDeleted) {
  PuboPolynomial p(3);
  p.add_term({0, 1}, 1.0);
  p.add_term({1, 0}, -1.0);
  p.add_term({2}, 0.0);
  EXPECT_TRUE(p.empty());
}

TEST(PuboPolynomial, OutOfRangeIndexThrows) {
  PuboPolynomial p(3);
  EXPECT_THROW(p.add_term({0, 3}, 1.0), DimensionError);
}

TEST(PuboPolynomial, FixSpinsMatchesSubstitution) {
  std::mt19937_64 rng(11);
  const auto p = oracle::random_pubo(6, 3, 15, 3, rng);
  const std::vector<int> fixed{1, 0, -1, 0, 0, 1};
  const auto q = fix_spins(p, fixed);
  ASSERT_EQ(q.num_vars(), 3u);
  for (Mask m = 0; m < 8; ++m) {
    const auto f = SpinAssignment::from_mask(3, m);
    const SpinAssignment full{1, f[0], -1, f[1], f[2], 1};
    EXPECT_DOUBLE_EQ(evaluate(q, f), evaluate(p, full));
  }
}
