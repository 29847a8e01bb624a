#pragma once

// End-to-end classical divide-and-conquer solver, timed in four steps:
//   (1) community detection and boundary refinement
//   (2) quenching (exact mode) or per-community solves (core-fixed mode)
//   (3) assembly of the reduced PUBO
//   (4) solution of the reduced PUBO (internal oracle or external MaxSAT solver)
// followed by lifting the reduced optimum back to all variables.

#include <algorithm>
#include <array>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnc/brute_force.hpp"
#include "dnc/community.hpp"
#include "dnc/error.hpp"
#include "dnc/external_solver.hpp"
#include "dnc/graph.hpp"
#include "dnc/io.hpp"
#include "dnc/qaoa.hpp"
#include "dnc/reducer.hpp"
#include "dnc/wcnf.hpp"

namespace dnc {

enum class SolveBackend { oracle, wcnf };

inline SolveBackend parse_solve_backend(const std::string& s) {
  if (s == "oracle") return SolveBackend::oracle;
  if (s == "wcnf") return SolveBackend::wcnf;
  throw ParameterError("unknown backend '" + s + "' (expected oracle or wcnf)");
}

struct PipelineConfig {
  ReductionMode mode = ReductionMode::exact;
  SolveBackend backend = SolveBackend::oracle;
  ExternalSolverConfig external;
  std::uint64_t seed = 0;
  bool refine = true;
  ReducerOptions reducer;
  std::size_t max_oracle_vars = kBruteForceMaxVars;
  bool verify_original = false;  // also brute-force the original instance (n <= max_oracle_vars)
};

struct PipelineReport {
  std::size_t n = 0;
  std::size_t num_edges = 0;
  long k = -1;  // regular degree, -1 if the graph is not regular
  std::uint64_t seed = 0;
  ReductionMode mode = ReductionMode::exact;
  std::string backend_used;
  std::vector<std::string> notes;
  std::size_t num_communities = 0;
  std::vector<std::size_t> community_sizes;
  std::size_t boundary_size = 0;
  std::size_t score_g = 0;
  std::vector<std::size_t> degree_histogram;
  std::array<double, 4> step_seconds{};
  double total_seconds = 0.0;
  double e_min_reduced = 0.0;
  double e_lifted = 0.0;
  std::optional<double> e_min_original;
  SpinAssignment lifted;

  std::array<double, 4> step_fractions() const {
    std::array<double, 4> f{};
    for (std::size_t i = 0; i < 4; ++i) f[i] = total_seconds > 0.0 ? step_seconds[i] / total_seconds : 0.25;
    return f;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = {
        {"n", n},
        {"num_edges", num_edges},
        {"k", k},
        {"seed", seed},
        {"mode", to_string(mode)},
        {"backend", backend_used},
        {"notes", notes},
        {"num_communities", num_communities},
        {"community_sizes", community_sizes},
        {"B", boundary_size},
        {"g", score_g},
        {"reduced_degree_histogram", degree_histogram},
        {"step_seconds", step_seconds},
        {"step_fractions", step_fractions()},
        {"total_seconds", total_seconds},
        {"e_min_reduced", e_min_reduced},
        {"e_lifted", e_lifted},
        {"lifted_assignment", lifted.to_vector()},
    };
    j["e_min_original"] = e_min_original ? nlohmann::json(*e_min_original) : nlohmann::json(nullptr);
    return j;
  }

  static std::string csv_header() { return "n,k,seed,mode,num_communities,B,g,t1,t2,t3,t4,e_min_original,e_min_reduced"; }

  std::string to_csv_row() const {
    std::ostringstream os;
    os << n << ',' << k << ',' << seed << ',' << to_string(mode) << ',' << num_communities << ',' << boundary_size
       << ',' << score_g;
    for (double t : step_seconds) os << ',' << detail::format_real(t);
    os << ',' << (e_min_original ? detail::format_real(*e_min_original) : "") << ','
       << detail::format_real(e_min_reduced);
    return os.str();
  }
};

namespace detail {

template <typename F>
auto run_step(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineStepError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineStepError(name, e.what());
  }
}

}  // namespace detail

inline CommunityAssignment find_communities(const Graph& g, std::uint64_t seed, bool refine) {
  auto ca = detect_multilevel(g, seed);
  return refine ? refine_boundary(g, ca, seed) : ca;
}

// Runs the four steps on the QUBO `poly` whose interaction graph is `g`.
inline PipelineReport classical_pipeline(const PuboPolynomial& poly, const Graph& g, const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  PipelineReport rep;
  rep.n = g.num_vertices();
  rep.num_edges = g.num_edges();
  rep.k = g.regular_degree();
  rep.seed = cfg.seed;
  rep.mode = cfg.mode;
  const ExactSolver oracle = brute_force_solver(cfg.max_oracle_vars);

  std::array<clock::time_point, 5> mark;
  mark[0] = clock::now();
  const auto ca = detail::run_step("1 (communities)", [&] { return find_communities(g, cfg.seed, cfg.refine); });
  mark[1] = clock::now();

  auto split = detail::run_step("2 (quench)", [&] { return split_energy(poly, ca); });
  std::vector<QuenchTable> tables;
  std::vector<Mask> cores;
  detail::run_step("2 (quench)", [&] {
    if (cfg.mode == ReductionMode::exact) {
      tables = quench_all(split, oracle, cfg.reducer);
    } else {
      cores = solve_communities(split, oracle);
    }
    return 0;
  });
  mark[2] = clock::now();

  const ReducedInstance ri = detail::run_step("3 (assemble)", [&] {
    return cfg.mode == ReductionMode::exact ? assemble_exact(std::move(split), std::move(tables), ca, oracle)
                                            : assemble_core_fixed(std::move(split), cores, ca, oracle);
  });
  mark[3] = clock::now();

  SpinAssignment reduced_best;
  detail::run_step("4 (solve)", [&] {
    if (cfg.backend == SolveBackend::wcnf && ri.num_vars() > 0) {
      try {
        const auto w = pubo_to_wcnf(ri.poly);
        const auto r = run_external_solver(w, ri.poly, cfg.external);
        rep.e_min_reduced = r.energy;
        reduced_best = r.assignment;
        rep.backend_used = "wcnf";
        return 0;
      } catch (const ExternalSolverError& e) {
        if (!cfg.external.fallback_to_oracle) throw;
        rep.notes.push_back(std::string("external solver failed, used oracle: ") + e.what());
      }
    }
    const auto s = brute_force_min(ri.poly, cfg.max_oracle_vars);
    rep.e_min_reduced = s.energy;
    reduced_best = s.assignment;
    rep.backend_used = "oracle";
    return 0;
  });
  mark[4] = clock::now();

  for (std::size_t i = 0; i < 4; ++i) rep.step_seconds[i] = std::chrono::duration<double>(mark[i + 1] - mark[i]).count();
  rep.total_seconds = std::chrono::duration<double>(mark[4] - mark[0]).count();

  rep.num_communities = ca.num_communities();
  for (std::size_t c = 0; c < ca.num_communities(); ++c) rep.community_sizes.push_back(ca.members(c).size());
  rep.boundary_size = ca.global_boundary().size();
  rep.score_g = score_g(ca);
  rep.degree_histogram = degree_histogram(ri.poly);

  rep.lifted = detail::run_step("lift", [&] { return lift_solution(ri, reduced_best); });
  rep.e_lifted = evaluate(poly, rep.lifted);
  if (cfg.mode == ReductionMode::exact &&
      std::abs(rep.e_lifted - rep.e_min_reduced) > 1e-9 * std::max(1.0, std::abs(rep.e_min_reduced))) {
    throw IntegrityError("lifted energy " + detail::format_real(rep.e_lifted) + " differs from reduced optimum " +
                         detail::format_real(rep.e_min_reduced));
  }
  if (cfg.verify_original) {
    rep.e_min_original = detail::run_step("verify", [&] { return brute_force_min(poly, cfg.max_oracle_vars).energy; });
  }
  return rep;
}

// MaxCut on `g`.
inline PipelineReport classical_pipeline(const Graph& g, const PipelineConfig& cfg) {
  return classical_pipeline(maxcut_to_qubo(g), g, cfg);
}

// QAOA on the original instance and on both reductions; every ratio uses the original
// minimum energy as denominator.
struct QaoaComparison {
  double e_min = 0.0;
  std::size_t qubits_original = 0;
  std::size_t qubits_reduced = 0;
  QaoaOptimizeResult original;
  QaoaOptimizeResult reduced_exact;
  QaoaOptimizeResult reduced_core_fixed;

  nlohmann::json to_json() const {
    auto run = [](const QaoaOptimizeResult& r) {
      return nlohmann::json{{"best_ratio", r.best_ratio.value_or(0.0)},
                            {"best_expectation", r.best_expectation},
                            {"best_params", {{"gammas", r.best_params.gammas()}, {"betas", r.best_params.betas()}}},
                            {"evals_used", r.evals_used}};
    };
    return {{"e_min", e_min},
            {"qubits_original", qubits_original},
            {"qubits_reduced", qubits_reduced},
            {"original", run(original)},
            {"reduced_exact", run(reduced_exact)},
            {"reduced_core_fixed", run(reduced_core_fixed)}};
  }
};

inline QaoaComparison compare_qaoa(const PuboPolynomial& poly, const CommunityAssignment& ca,
                                   QaoaOptimizeOptions opts, std::size_t max_qubits = kDefaultMaxQubits) {
  QaoaComparison cmp;
  cmp.e_min = brute_force_min(poly).energy;
  opts.e_min = cmp.e_min;
  cmp.qubits_original = poly.num_vars();
  cmp.qubits_reduced = ca.global_boundary().size();
  cmp.original = optimize_qaoa(poly, opts, max_qubits);
  cmp.reduced_exact = optimize_qaoa(reduce_exact(poly, ca).poly, opts, max_qubits);
  cmp.reduced_core_fixed = optimize_qaoa(reduce_core_fixed(poly, ca).poly, opts, max_qubits);
  return cmp;
}

}  // namespace dnc
