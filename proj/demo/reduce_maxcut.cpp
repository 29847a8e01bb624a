// Reduce MaxCut on a random 3-regular graph to its boundary spins and compare the
// reduced optimum with brute force on the full instance.
//
//   demo_reduce_maxcut [n] [seed]

#include <cstdlib>
#include <iostream>

#include "dnc/dnc.hpp"

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const auto g = dnc::random_regular(n, 3, seed);
  const auto poly = dnc::maxcut_to_qubo(g);

  const auto base = dnc::detect_multilevel(g, seed);
  const auto ca = dnc::refine_boundary(g, base, seed);
  std::cout << "communities: " << ca.num_communities() << ", |B| " << base.global_boundary().size() << " -> "
            << ca.global_boundary().size() << " of " << n << "\n";

  const auto ri = dnc::reduce_exact(poly, ca);
  const auto reduced = dnc::brute_force_min(ri.poly);
  const auto lifted = dnc::lift_solution(ri, reduced.assignment);
  std::cout << "reduced PUBO: " << ri.num_vars() << " variables, " << ri.poly.num_terms() << " terms, degree "
            << ri.poly.degree() << "\n";
  std::cout << "reduced minimum " << reduced.energy << ", lifted cut " << dnc::cut_weight(g, lifted) << "\n";
  if (n <= 26) std::cout << "brute-force minimum " << dnc::brute_force_min(poly).energy << "\n";
  return 0;
}
