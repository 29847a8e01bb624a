#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dnc/dnc.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QUBO_DNC_EXE) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("qubo_dnc_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenerateRegularIsDeterministic) {
  const auto a = scratch("gen_a"), b = scratch("gen_b");
  ASSERT_EQ(run("--seed 5 generate --kind regular --n 20 --k 3 --count 1 --out " + a.string()).status, 0);
  ASSERT_EQ(run("--seed 5 generate --kind regular --n 20 --k 3 --count 1 --out " + b.string()).status, 0);
  const auto file = "regular_n20_k3_s5.txt";
  const auto text = slurp(a / file);
  EXPECT_EQ(text, slurp(b / file));
  std::istringstream in(text);
  EXPECT_EQ(dnc::read_graph(in).num_edges(), 30u);
}

TEST(Cli, GenerateErdosZeroProbability) {
  const auto d = scratch("gen_er");
  ASSERT_EQ(run("generate --kind erdos --n 40 --p 0 --count 2 --out " + d.string()).status, 0);
  EXPECT_EQ(slurp(d / "erdos_n40_p0_s0.txt"), "40 0\n");
  EXPECT_TRUE(fs::exists(d / "erdos_n40_p0_s1.txt"));
}

TEST(Cli, GenerateRejectsOddDegreeSum) {
  const auto d = scratch("gen_bad");
  const auto r = run("generate --kind regular --n 5 --k 3 --out " + d.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("error"), std::string::npos);
}

TEST(Cli, StatsCsv) {
  const auto r = run("stats --kind regular --n 60 --k 3 --count 5");
  ASSERT_EQ(r.status, 0) << r.out;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "graph,n,num_communities,mean_community_size,B_baseline,B_refined,reduction_baseline,reduction_refined");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(run("stats --kind regular --n 60 --k 3 --count 5").out, r.out);
}

TEST(Cli, StatsJsonSummary) {
  const auto r = run("--format json --jobs 2 stats --kind regular --n 60 --count 10");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 10u);
  EXPECT_GT(j["summary"]["mean_reduction_refined"].get<double>(), j["summary"]["mean_reduction_baseline"].get<double>());
}

TEST(Cli, PipelineExactMatchesBruteForce) {
  const auto d = scratch("pipe");
  ASSERT_EQ(run("--seed 2 generate --n 16 --out " + d.string()).status, 0);
  const auto graph = (d / "regular_n16_k3_s2.txt").string();
  const auto r = run("--seed 2 pipeline --input " + graph + " --verify");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  const auto direct = dnc::brute_force_min(dnc::maxcut_to_qubo(dnc::load_graph(graph))).energy;
  EXPECT_EQ(j["e_min_reduced"].get<double>(), direct);
  EXPECT_EQ(j["e_min_original"].get<double>(), direct);
  EXPECT_EQ(j["step_seconds"].size(), 4u);

  const auto f = run("--seed 2 pipeline --input " + graph + " --mode core-fixed");
  ASSERT_EQ(f.status, 0) << f.out;
  EXPECT_GE(nlohmann::json::parse(f.out)["e_min_reduced"].get<double>(), direct);

  const auto csv = run("--seed 2 --format csv pipeline --input " + graph);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), dnc::PipelineReport::csv_header());
}

TEST(Cli, PipelineQaoaReportsThreeRatios) {
  const auto d = scratch("pipe_qaoa");
  ASSERT_EQ(run("generate --n 10 --out " + d.string()).status, 0);
  const auto r = run("pipeline --backend qaoa --p 2 --budget 200 --starts 2 --input " +
                     (d / "regular_n10_k3_s0.txt").string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"original", "reduced_exact", "reduced_core_fixed"}) {
    const double ratio = j[key]["best_ratio"].get<double>();
    EXPECT_GT(ratio, 0.0);
    EXPECT_LE(ratio, 1.0 + 1e-12);
    EXPECT_LE(j[key]["evals_used"].get<std::size_t>(), 200u);
  }
}

TEST(Cli, QaoaOnPolynomialWithTrace) {
  const auto d = scratch("qaoa");
  ASSERT_EQ(run("generate --n 8 --out " + d.string()).status, 0);
  const auto graph = (d / "regular_n8_k3_s0.txt").string();
  const auto poly = (d / "reduced.json").string();
  ASSERT_EQ(run("reduce --input " + graph + " --out " + poly).status, 0);
  const auto trace = (d / "trace.csv").string();
  const auto args = "--seed 3 qaoa --p 2 --budget 150 --starts 3 --input " + poly + " --trace " + trace;
  const auto r = run(args);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["evals_used"].get<std::size_t>(), 150u);
  EXPECT_EQ(j["best_params"]["gammas"].size(), 2u);
  EXPECT_TRUE(j.contains("best_ratio"));
  EXPECT_EQ(run(args).out, r.out);
  EXPECT_EQ(slurp(trace).substr(0, 16), "eval,expectation");
}

TEST(Cli, ReduceWritesJsonAndWcnf) {
  const auto d = scratch("reduce");
  ASSERT_EQ(run("generate --n 20 --out " + d.string()).status, 0);
  const auto out = (d / "r.json").string();
  const auto wcnf = (d / "r.wcnf").string();
  ASSERT_EQ(run("reduce --input " + (d / "regular_n20_k3_s0.txt").string() + " --out " + out + " --wcnf " + wcnf).status, 0);
  const auto j = dnc::load_json(out);
  EXPECT_EQ(j["mode"], "exact");
  EXPECT_EQ(j["original_num_vars"], 20);
  EXPECT_EQ(slurp(wcnf).substr(0, 7), "p wcnf ");
}

TEST(Cli, SolveFallsBackWhenSolverMissing) {
  const auto d = scratch("solve");
  ASSERT_EQ(run("generate --n 12 --out " + d.string()).status, 0);
  const auto graph = (d / "regular_n12_k3_s0.txt").string();
  const auto r = run("--solver-cmd /nonexistent/solver solve --backend wcnf --input " + graph);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["backend"], "oracle");
  EXPECT_TRUE(j.contains("note"));
  EXPECT_EQ(run("--solver-cmd /nonexistent/solver solve --no-fallback --backend wcnf --input " + graph).status, 2);
}

TEST(Cli, BenchCsvHasFractions) {
  const auto r = run("bench --n 16,20 --count 2");
  ASSERT_EQ(r.status, 0) << r.out;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, dnc::PipelineReport::csv_header() + ",f1,f2,f3,f4");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, BadCapsRejected) { EXPECT_NE(run("--caps warp=3 stats --n 20").status, 0); }
