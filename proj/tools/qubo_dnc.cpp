// qubo-dnc: command-line front end for the divide-and-conquer QUBO toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dnc/dnc.hpp"

namespace fs = std::filesystem;
using namespace dnc;

namespace {

struct Caps {
  std::size_t boundary = 24;
  std::size_t qubits = kDefaultMaxQubits;
  std::size_t oracle = kBruteForceMaxVars;
};

struct Globals {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string format;  // empty: command default
  std::string solver_cmd;
  double solver_timeout = 60.0;
  std::string caps_spec;
  Caps caps;
};

Caps parse_caps(const std::string& spec) {
  Caps caps;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("cap '" + item + "' is not key=value");
    const auto key = item.substr(0, eq);
    const auto value = static_cast<std::size_t>(std::stoul(item.substr(eq + 1)));
    if (key == "boundary") {
      caps.boundary = value;
    } else if (key == "qubits") {
      caps.qubits = value;
    } else if (key == "oracle") {
      caps.oracle = value;
    } else {
      throw ParameterError("unknown cap '" + key + "' (expected boundary, qubits or oracle)");
    }
  }
  return caps;
}

std::string format_or(const Globals& g, const char* fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "csv" && f != "json") throw ParameterError("unknown format '" + f + "'");
  return f;
}

// Output goes to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  auto out = detail::open_out(path);
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// A graph file (edge list) or a polynomial (.json).
struct Instance {
  PuboPolynomial poly;
  std::optional<Graph> graph;
};

Instance load_instance(const std::string& path) {
  if (fs::path(path).extension() == ".json") {
    auto poly = load_polynomial(path);
    return {std::move(poly), std::nullopt};
  }
  auto g = load_graph(path);
  auto poly = maxcut_to_qubo(g);
  return {std::move(poly), std::move(g)};
}

Graph graph_of(const Instance& inst) { return inst.graph ? *inst.graph : interaction_graph(inst.poly); }

CommunityAssignment communities_for(const Graph& g, const Globals& gl, bool refine, const std::string& membership_path) {
  if (!membership_path.empty()) {
    auto in = detail::open_in(membership_path);
    return CommunityAssignment(g, read_membership(in));
  }
  return find_communities(g, gl.seed, refine);
}

nlohmann::json params_json(const QaoaParams& p) { return {{"gammas", p.gammas()}, {"betas", p.betas()}}; }

// Graphs named on the command line, or generated from --kind/--n/... when none are.
struct GraphSource {
  std::vector<std::string> files;
  std::string kind = "regular";
  std::vector<std::size_t> sizes;
  std::size_t k = 3;
  double p = 0.3;
  std::size_t count = 1;

  void add_options(CLI::App* cmd) {
    cmd->add_option("graphs", files, "Graph files (edge-list format)");
    cmd->add_option("--kind", kind, "Generated graph class when no files are given")
        ->check(CLI::IsMember({"regular", "erdos"}));
    cmd->add_option("--n", sizes, "Vertex counts of generated graphs")->delimiter(',');
    cmd->add_option("--k", k, "Degree of generated regular graphs");
    cmd->add_option("--p", p, "Edge probability of generated Erdos-Renyi graphs");
    cmd->add_option("--count", count, "Generated graphs per vertex count");
  }

  struct Item {
    std::string name;
    Graph graph;
    std::uint64_t seed;
  };

  std::vector<Item> load(std::uint64_t seed) const {
    std::vector<Item> items;
    if (!files.empty()) {
      for (const auto& f : files) items.push_back({f, load_graph(f), seed});
      return items;
    }
    if (sizes.empty()) throw ParameterError("give graph files or --n to generate graphs");
    for (auto n : sizes) {
      for (std::size_t i = 0; i < count; ++i) {
        const auto s = seed + i;
        Graph g = kind == "regular" ? random_regular(n, k, s) : random_erdos_renyi(n, p, s);
        items.push_back({kind + "_n" + std::to_string(n) + "_s" + std::to_string(s), std::move(g), s});
      }
    }
    return items;
  }
};

void cmd_generate(const Globals& gl, const std::string& kind, std::size_t n, std::size_t k, double p,
                  std::size_t count, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < count; ++i) {
    const auto seed = gl.seed + i;
    const Graph g = kind == "regular" ? random_regular(n, k, seed) : random_erdos_renyi(n, p, seed);
    const std::string param = kind == "regular" ? "k" + std::to_string(k) : "p" + detail::format_real(p);
    const auto path = (fs::path(out_dir) / (kind + "_n" + std::to_string(n) + "_" + param + "_s" +
                                            std::to_string(seed) + ".txt")).string();
    save_graph(path, g);
    std::cout << path << '\n';
  }
}

void cmd_stats(const Globals& gl, const GraphSource& src, bool no_refine, const std::string& membership_dir) {
  const auto items = src.load(gl.seed);
  struct Row {
    std::size_t n = 0, communities = 0, b_base = 0, b_refined = 0;
    double mean_size = 0.0;
    std::vector<std::size_t> membership;
  };
  std::vector<Row> rows(items.size());
  parallel_for(items.size(), gl.jobs, [&](std::size_t i) {
    const auto& g = items[i].graph;
    const auto base = detect_multilevel(g, items[i].seed);
    const auto final_ca = no_refine ? base : refine_boundary(g, base, items[i].seed);
    rows[i] = {g.num_vertices(), final_ca.num_communities(), base.global_boundary().size(),
               final_ca.global_boundary().size(), final_ca.mean_community_size(), final_ca.membership()};
  });

  if (!membership_dir.empty()) {
    fs::create_directories(membership_dir);
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto out = detail::open_out((fs::path(membership_dir) / (fs::path(items[i].name).stem().string() + ".memb")).string());
      write_membership(out, rows[i].membership);
    }
  }

  auto reduction = [](std::size_t b, std::size_t n) { return n ? 1.0 - static_cast<double>(b) / n : 0.0; };
  if (format_or(gl, "csv") == "csv") {
    std::ostringstream os;
    os << "graph,n,num_communities,mean_community_size,B_baseline,B_refined,reduction_baseline,reduction_refined\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& r = rows[i];
      os << items[i].name << ',' << r.n << ',' << r.communities << ',' << detail::format_real(r.mean_size) << ','
         << r.b_base << ',';
      if (!no_refine) os << r.b_refined;
      os << ',' << detail::format_real(reduction(r.b_base, r.n)) << ',';
      if (!no_refine) os << detail::format_real(reduction(r.b_refined, r.n));
      os << '\n';
    }
    std::cout << os.str();
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  double sum_base = 0.0, sum_ref = 0.0, sum_comm = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& r = rows[i];
    nlohmann::json j = {{"graph", items[i].name},
                        {"n", r.n},
                        {"num_communities", r.communities},
                        {"mean_community_size", r.mean_size},
                        {"B_baseline", r.b_base},
                        {"reduction_baseline", reduction(r.b_base, r.n)}};
    if (!no_refine) {
      j["B_refined"] = r.b_refined;
      j["reduction_refined"] = reduction(r.b_refined, r.n);
    }
    arr.push_back(j);
    sum_base += reduction(r.b_base, r.n);
    sum_ref += reduction(r.b_refined, r.n);
    sum_comm += static_cast<double>(r.communities);
  }
  const double count = items.empty() ? 1.0 : static_cast<double>(items.size());
  nlohmann::json summary = {{"graphs", items.size()},
                            {"mean_num_communities", sum_comm / count},
                            {"mean_reduction_baseline", sum_base / count}};
  if (!no_refine) summary["mean_reduction_refined"] = sum_ref / count;
  std::cout << dump({{"rows", arr}, {"summary", summary}});
}

void cmd_reduce(const Globals& gl, const std::string& input, const std::string& mode_name, bool no_refine,
                const std::string& membership, const std::string& out, const std::string& wcnf_out) {
  const auto inst = load_instance(input);
  const auto g = graph_of(inst);
  const auto ca = communities_for(g, gl, !no_refine, membership);
  const auto mode = parse_reduction_mode(mode_name);
  ReducerOptions opts;
  opts.max_boundary = gl.caps.boundary;
  opts.jobs = gl.jobs;
  const auto solver = brute_force_solver(gl.caps.oracle);
  const auto ri = mode == ReductionMode::exact ? reduce_exact(inst.poly, ca, solver, opts)
                                               : reduce_core_fixed(inst.poly, ca, solver);
  emit(out, dump(reduced_to_json(ri)));
  if (!wcnf_out.empty()) save_wcnf(wcnf_out, pubo_to_wcnf(ri.poly));
}

void cmd_solve(const Globals& gl, const std::string& input, const std::string& backend, bool fallback) {
  const auto inst = load_instance(input);
  nlohmann::json j;
  if (parse_solve_backend(backend) == SolveBackend::wcnf) {
    ExternalSolverConfig cfg{gl.solver_cmd, gl.solver_timeout, fallback};
    try {
      const auto r = run_external_solver(pubo_to_wcnf(inst.poly), inst.poly, cfg);
      j = {{"backend", "wcnf"}, {"energy", r.energy}, {"assignment", r.assignment.to_vector()}, {"cost", r.cost}};
      std::cout << dump(j);
      return;
    } catch (const ExternalSolverError& e) {
      if (!fallback) throw;
      j["note"] = std::string("external solver failed, used oracle: ") + e.what();
    }
  }
  const auto s = brute_force_min(inst.poly, gl.caps.oracle);
  j["backend"] = "oracle";
  j["energy"] = s.energy;
  j["assignment"] = s.assignment.to_vector();
  std::cout << dump(j);
}

void cmd_qaoa(const Globals& gl, const std::string& input, std::size_t depth, std::size_t budget,
              std::size_t starts, std::optional<double> e_min, const std::string& trace_path) {
  const auto inst = load_instance(input);
  QaoaOptimizeOptions opts;
  opts.depth = depth;
  opts.budget = budget;
  opts.starts = starts;
  opts.seed = gl.seed;
  opts.e_min = e_min ? *e_min : brute_force_min(inst.poly, gl.caps.oracle).energy;
  const auto r = optimize_qaoa(inst.poly, opts, gl.caps.qubits);
  if (!trace_path.empty()) {
    std::ostringstream os;
    os << "eval,expectation\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) os << i << ',' << detail::format_real(r.trace[i]) << '\n';
    emit(trace_path, os.str());
  }
  std::cout << dump({{"best_ratio", *r.best_ratio},
                     {"best_expectation", r.best_expectation},
                     {"e_min", *opts.e_min},
                     {"best_params", params_json(r.best_params)},
                     {"evals_used", r.evals_used}});
}

PipelineConfig pipeline_config(const Globals& gl, const std::string& mode, const std::string& backend, bool verify,
                               bool no_refine, bool fallback) {
  PipelineConfig cfg;
  cfg.mode = parse_reduction_mode(mode);
  cfg.backend = parse_solve_backend(backend);
  cfg.external = {gl.solver_cmd, gl.solver_timeout, fallback};
  cfg.seed = gl.seed;
  cfg.refine = !no_refine;
  cfg.reducer.max_boundary = gl.caps.boundary;
  cfg.reducer.jobs = gl.jobs;
  cfg.max_oracle_vars = gl.caps.oracle;
  cfg.verify_original = verify;
  return cfg;
}

void cmd_pipeline(const Globals& gl, const std::string& input, const std::string& mode, const std::string& backend,
                  bool verify, bool no_refine, bool fallback, std::size_t depth, std::size_t budget,
                  std::size_t starts) {
  const auto inst = load_instance(input);
  const auto g = graph_of(inst);
  if (backend == "qaoa") {
    const auto ca = find_communities(g, gl.seed, !no_refine);
    QaoaOptimizeOptions opts;
    opts.depth = depth;
    opts.budget = budget;
    opts.starts = starts;
    opts.seed = gl.seed;
    const auto cmp = compare_qaoa(inst.poly, ca, opts, gl.caps.qubits);
    auto j = cmp.to_json();
    j["n"] = g.num_vertices();
    j["seed"] = gl.seed;
    j["num_communities"] = ca.num_communities();
    j["B"] = ca.global_boundary().size();
    j["depth"] = depth;
    j["budget"] = budget;
    std::cout << dump(j);
    return;
  }
  const auto rep = classical_pipeline(inst.poly, g, pipeline_config(gl, mode, backend, verify, no_refine, fallback));
  if (format_or(gl, "json") == "csv") {
    std::cout << PipelineReport::csv_header() << '\n' << rep.to_csv_row() << '\n';
  } else {
    std::cout << dump(rep.to_json());
  }
}

void cmd_bench(const Globals& gl, const GraphSource& src, const std::string& mode, const std::string& backend,
               bool verify, bool no_refine, bool fallback) {
  const auto items = src.load(gl.seed);
  std::vector<PipelineReport> reports(items.size());
  parallel_for(items.size(), gl.jobs, [&](std::size_t i) {
    auto gl_i = gl;
    gl_i.seed = items[i].seed;
    gl_i.jobs = 1;
    reports[i] = classical_pipeline(items[i].graph, pipeline_config(gl_i, mode, backend, verify, no_refine, fallback));
  });
  if (format_or(gl, "csv") == "csv") {
    std::ostringstream os;
    os << PipelineReport::csv_header() << ",f1,f2,f3,f4\n";
    for (const auto& r : reports) {
      os << r.to_csv_row();
      for (double f : r.step_fractions()) os << ',' << detail::format_real(f);
      os << '\n';
    }
    std::cout << os.str();
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  std::cout << dump(arr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-conquer reduction and solvers for QUBO/PUBO instances"};
  app.require_subcommand(1);
  Globals gl;
  app.add_option("--seed", gl.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", gl.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", gl.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--solver-cmd", gl.solver_cmd, "External weighted MaxSAT solver command");
  app.add_option("--solver-timeout", gl.solver_timeout, "External solver timeout in seconds")->capture_default_str();
  app.add_option("--caps", gl.caps_spec, "Resource caps, e.g. boundary=24,qubits=24,oracle=30");

  // generate
  auto* gen = app.add_subcommand("generate", "Write random graphs in edge-list format");
  std::string gen_kind = "regular", gen_out = ".";
  std::size_t gen_n = 20, gen_k = 3, gen_count = 1;
  double gen_p = 0.3;
  gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"regular", "erdos"}))->capture_default_str();
  gen->add_option("--n", gen_n)->capture_default_str();
  gen->add_option("--k", gen_k)->capture_default_str();
  gen->add_option("--p", gen_p)->capture_default_str();
  gen->add_option("--count", gen_count)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Community and boundary statistics per graph");
  GraphSource stats_src;
  stats_src.add_options(stats);
  bool stats_no_refine = false;
  std::string stats_memb;
  stats->add_flag("--no-refine", stats_no_refine, "Skip boundary refinement");
  stats->add_option("--membership-dir", stats_memb, "Write final memberships here");

  // reduce
  auto* red = app.add_subcommand("reduce", "Reduce an instance to its boundary variables");
  std::string red_in, red_mode = "exact", red_memb, red_out, red_wcnf;
  bool red_no_refine = false;
  red->add_option("--input", red_in, "Graph file or polynomial .json")->required();
  red->add_option("--mode", red_mode)->check(CLI::IsMember({"exact", "core-fixed"}))->capture_default_str();
  red->add_flag("--no-refine", red_no_refine);
  red->add_option("--membership", red_memb, "Use this membership file instead of detection");
  red->add_option("--out", red_out, "Reduced instance JSON (default stdout)");
  red->add_option("--wcnf", red_wcnf, "Also write the reduced instance as WCNF");

  // solve
  auto* sol = app.add_subcommand("solve", "Minimize an instance directly");
  std::string sol_in, sol_backend = "oracle";
  bool sol_no_fallback = false;
  sol->add_option("--input", sol_in)->required();
  sol->add_option("--backend", sol_backend)->check(CLI::IsMember({"oracle", "wcnf"}))->capture_default_str();
  sol->add_flag("--no-fallback", sol_no_fallback, "Fail instead of using the oracle when the solver fails");

  // qaoa
  auto* qa = app.add_subcommand("qaoa", "Optimize QAOA parameters for an instance");
  std::string qa_in, qa_trace;
  std::size_t qa_p = 4, qa_budget = 10000, qa_starts = 10;
  std::optional<double> qa_emin;
  qa->add_option("--input", qa_in)->required();
  qa->add_option("--p", qa_p, "Circuit depth")->capture_default_str();
  qa->add_option("--budget", qa_budget, "Objective evaluations")->capture_default_str();
  qa->add_option("--starts", qa_starts)->capture_default_str();
  qa->add_option("--e-min", qa_emin, "Known minimum energy (default: brute force)");
  qa->add_option("--trace", qa_trace, "Per-evaluation CSV trace");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Full divide-and-conquer run on one instance");
  std::string pipe_in, pipe_mode = "exact", pipe_backend = "oracle";
  bool pipe_verify = false, pipe_no_refine = false, pipe_no_fallback = false;
  std::size_t pipe_p = 4, pipe_budget = 10000, pipe_starts = 10;
  pipe->add_option("--input", pipe_in)->required();
  pipe->add_option("--mode", pipe_mode)->check(CLI::IsMember({"exact", "core-fixed"}))->capture_default_str();
  pipe->add_option("--backend", pipe_backend)->check(CLI::IsMember({"oracle", "wcnf", "qaoa"}))->capture_default_str();
  pipe->add_flag("--verify", pipe_verify, "Also brute-force the original instance");
  pipe->add_flag("--no-refine", pipe_no_refine);
  pipe->add_flag("--no-fallback", pipe_no_fallback);
  pipe->add_option("--p", pipe_p)->capture_default_str();
  pipe->add_option("--budget", pipe_budget)->capture_default_str();
  pipe->add_option("--starts", pipe_starts)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Pipeline timing breakdown over many graphs");
  GraphSource bench_src;
  bench_src.add_options(bench);
  std::string bench_mode = "exact", bench_backend = "oracle";
  bool bench_verify = false, bench_no_refine = false, bench_no_fallback = false;
  bench->add_option("--mode", bench_mode)->check(CLI::IsMember({"exact", "core-fixed"}))->capture_default_str();
  bench->add_option("--backend", bench_backend)->check(CLI::IsMember({"oracle", "wcnf"}))->capture_default_str();
  bench->add_flag("--verify", bench_verify);
  bench->add_flag("--no-refine", bench_no_refine);
  bench->add_flag("--no-fallback", bench_no_fallback);

  CLI11_PARSE(app, argc, argv);

  try {
    gl.caps = parse_caps(gl.caps_spec);
    if (gen->parsed()) cmd_generate(gl, gen_kind, gen_n, gen_k, gen_p, gen_count, gen_out);
    if (stats->parsed()) cmd_stats(gl, stats_src, stats_no_refine, stats_memb);
    if (red->parsed()) cmd_reduce(gl, red_in, red_mode, red_no_refine, red_memb, red_out, red_wcnf);
    if (sol->parsed()) cmd_solve(gl, sol_in, sol_backend, !sol_no_fallback);
    if (qa->parsed()) cmd_qaoa(gl, qa_in, qa_p, qa_budget, qa_starts, qa_emin, qa_trace);
    if (pipe->parsed()) {
      cmd_pipeline(gl, pipe_in, pipe_mode, pipe_backend, pipe_verify, pipe_no_refine, !pipe_no_fallback, pipe_p,
                   pipe_budget, pipe_starts);
    }
    if (bench->parsed()) cmd_bench(gl, bench_src, bench_mode, bench_backend, bench_verify, bench_no_refine, !bench_no_fallback);
  } catch (const ExternalSolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!e.raw_output().empty()) std::cerr << "solver output:\n" << e.raw_output();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
