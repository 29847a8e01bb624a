#pragma once

// Adapter for an external weighted MaxSAT solver (akmaxsat or any solver following the
// MaxSAT evaluation output conventions). The solver is run as `<command> <file.wcnf>`
// through /bin/sh; its output must contain "o <cost>" lines, cost being the total weight
// of falsified clauses, and "v" lines with the model, either as signed literals
// ("v 1 -2 3") or as a 0/1 string ("v 101").

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/polynomial.hpp"
#include "dnc/wcnf.hpp"

namespace dnc {

struct ExternalSolverConfig {
  std::string command;
  double timeout_seconds = 60.0;
  bool fallback_to_oracle = true;  // consulted by the pipeline, not by run_external_solver
};

struct ExternalSolverResult {
  std::int64_t cost = 0;               // falsified weight reported by the solver
  std::int64_t satisfied_weight = 0;
  SpinAssignment assignment;
  double energy = 0.0;
  std::string raw_output;
};

namespace detail {

struct ProcessOutput {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;
};

inline ProcessOutput run_shell(const std::string& command_line, double timeout_seconds) {
  int fds[2];
  if (pipe(fds) != 0) throw ExternalSolverError("pipe() failed", "");
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw ExternalSolverError("fork() failed", "");
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command_line.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  ProcessOutput out;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
  char buf[4096];
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      out.timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int r = poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (r < 0 && errno != EINTR) break;
    if (r <= 0) continue;
    const ssize_t got = read(fds[0], buf, sizeof buf);
    if (got <= 0) break;
    out.output.append(buf, static_cast<std::size_t>(got));
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
  return out;
}

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) {
    if (ch == '\'') {
      q += "'\\''";
    } else {
      q += ch;
    }
  }
  return q + "'";
}

}  // namespace detail

// Parses solver output into (cost, assignment). Throws ExternalSolverError when either is missing.
inline std::pair<std::int64_t, SpinAssignment> parse_maxsat_output(const std::string& output, std::size_t num_vars) {
  std::optional<std::int64_t> cost;
  std::vector<int> spins(num_vars, 0);
  bool have_model = false;
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "o") {
      std::int64_t v = 0;
      if (!(ls >> v)) throw ExternalSolverError("unparseable cost line '" + line + "'", output);
      cost = v;
    } else if (tag == "v") {
      std::string tok;
      while (ls >> tok) {
        have_model = true;
        if (tok.find_first_not_of("01") == std::string::npos && tok.size() == num_vars && tok.size() > 1) {
          for (std::size_t i = 0; i < num_vars; ++i) spins[i] = tok[i] == '1' ? 1 : -1;
          continue;
        }
        long lit = 0;
        try {
          lit = std::stol(tok);
        } catch (const std::exception&) {
          throw ExternalSolverError("unparseable model token '" + tok + "'", output);
        }
        if (lit == 0) continue;
        const auto var = static_cast<std::size_t>(std::labs(lit));
        if (var > num_vars) throw ExternalSolverError("model literal " + tok + " out of range", output);
        spins[var - 1] = lit > 0 ? 1 : -1;
      }
    }
  }
  if (!cost) throw ExternalSolverError("solver output has no 'o' line", output);
  if (!have_model) throw ExternalSolverError("solver output has no 'v' line", output);
  for (std::size_t i = 0; i < num_vars; ++i) {
    if (spins[i] == 0) throw ExternalSolverError("model does not assign variable " + std::to_string(i + 1), output);
  }
  return {*cost, SpinAssignment(spins)};
}

// Writes `w` (which must encode `poly` with Sense::minimize) to a temporary file, runs the
// solver and validates its claim: the energy implied by the reported cost must equal the
// energy of the reported model under `poly`.
inline ExternalSolverResult run_external_solver(const WcnfInstance& w, const PuboPolynomial& poly,
                                                const ExternalSolverConfig& cfg) {
  if (cfg.command.empty()) throw ExternalSolverError("no external solver command configured", "");
  if (w.num_vars != poly.num_vars()) throw DimensionError("WCNF instance and polynomial disagree on variable count");
  if (w.sense != Sense::minimize) throw ParameterError("external MaxSAT solving needs a Sense::minimize encoding");

  std::string path = (std::filesystem::temp_directory_path() / "dnc_XXXXXX.wcnf").string();
  const int fd = mkstemps(path.data(), 5);
  if (fd < 0) throw IoError("cannot create temporary WCNF file");
  close(fd);
  struct Cleanup {
    std::string p;
    ~Cleanup() { std::filesystem::remove(p); }
  } cleanup{path};
  save_wcnf(path, w);

  const auto proc = detail::run_shell(cfg.command + " " + detail::shell_quote(path), cfg.timeout_seconds);
  if (proc.timed_out) {
    throw ExternalSolverError("solver '" + cfg.command + "' timed out after " + std::to_string(cfg.timeout_seconds) + " s",
                              proc.output);
  }
  if (proc.exit_code == 127) throw ExternalSolverError("solver '" + cfg.command + "' not found", proc.output);
  // 10 and 30 are the conventional SAT/OPTIMUM exit codes of MaxSAT solvers.
  if (proc.exit_code != 0 && proc.exit_code != 10 && proc.exit_code != 30) {
    throw ExternalSolverError("solver '" + cfg.command + "' exited with status " + std::to_string(proc.exit_code),
                              proc.output);
  }
  auto [cost, assignment] = parse_maxsat_output(proc.output, w.num_vars);

  ExternalSolverResult r;
  r.cost = cost;
  r.satisfied_weight = w.total_weight() - cost;
  r.energy = energy_from_weight(w, r.satisfied_weight);
  r.raw_output = proc.output;
  const double evaluated = evaluate(poly, assignment);
  if (std::abs(evaluated - r.energy) > 1e-9 * std::max(1.0, std::abs(evaluated))) {
    throw IntegrityError("solver claims energy " + detail::format_real(r.energy) + " but its model evaluates to " +
                         detail::format_real(evaluated));
  }
  r.assignment = std::move(assignment);
  return r;
}

}  // namespace dnc
