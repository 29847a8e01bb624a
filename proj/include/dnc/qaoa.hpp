#pragma once

// Noise-free statevector QAOA for diagonal PUBO cost Hamiltonians.
//
// Basis state |m> carries the energy of the spin assignment decoded from m with the
// project mask convention (bit i set <=> spin i = -1, i.e. qubit i in |1>). A layer
// applies exp(-i gamma H_cost), then exp(-i beta X) on every qubit.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dnc/error.hpp"
#include "dnc/nelder_mead.hpp"
#include "dnc/polynomial.hpp"
#include "dnc/walsh_hadamard.hpp"

namespace dnc {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kDefaultMaxQubits = 24;

// Energies of all 2^n basis states.
inline std::vector<double> diagonal_energies(const PuboPolynomial& poly, std::size_t max_qubits = kDefaultMaxQubits) {
  if (poly.num_vars() > max_qubits) {
    throw ResourceError("diagonal of " + std::to_string(poly.num_vars()) + " qubits exceeds the cap of " +
                        std::to_string(max_qubits));
  }
  return polynomial_to_table(poly);
}

class QaoaParams {
 public:
  QaoaParams() = default;

  QaoaParams(std::vector<double> gammas, std::vector<double> betas)
      : gammas_(std::move(gammas)), betas_(std::move(betas)) {
    if (gammas_.size() != betas_.size()) {
      throw DimensionError("QAOA needs as many gammas as betas (" + std::to_string(gammas_.size()) + " vs " +
                           std::to_string(betas_.size()) + ")");
    }
  }

  // Layout used by the optimizer: gammas followed by betas.
  static QaoaParams from_flat(std::span<const double> x) {
    if (x.size() % 2 != 0) throw DimensionError("flat QAOA parameter vector must have even length");
    const auto p = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + p), std::vector<double>(x.begin() + p, x.end())};
  }

  std::vector<double> flat() const {
    std::vector<double> x = gammas_;
    x.insert(x.end(), betas_.begin(), betas_.end());
    return x;
  }

  // Same circuit at depth p >= depth(): the extra layers have zero angles.
  QaoaParams padded(std::size_t p) const {
    if (p < depth()) throw DimensionError("cannot pad QAOA parameters to a smaller depth");
    auto g = gammas_;
    auto b = betas_;
    g.resize(p, 0.0);
    b.resize(p, 0.0);
    return {std::move(g), std::move(b)};
  }

  std::size_t depth() const noexcept { return gammas_.size(); }
  const std::vector<double>& gammas() const noexcept { return gammas_; }
  const std::vector<double>& betas() const noexcept { return betas_; }

 private:
  std::vector<double> gammas_;
  std::vector<double> betas_;
};

class QaoaState {
 public:
  // |+>^n
  static QaoaState uniform(std::size_t num_qubits) {
    if (num_qubits >= 40) throw ResourceError("state vector too large");
    QaoaState s;
    s.num_qubits_ = num_qubits;
    const std::size_t d = std::size_t{1} << num_qubits;
    s.amplitudes_.assign(d, Amplitude(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    return s;
  }

  static QaoaState basis(std::size_t num_qubits, Mask m) {
    QaoaState s = uniform(num_qubits);
    std::fill(s.amplitudes_.begin(), s.amplitudes_.end(), Amplitude{});
    s.amplitudes_.at(m) = 1.0;
    return s;
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  std::span<Amplitude> amplitudes() noexcept { return amplitudes_; }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amplitudes_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
    return p;
  }

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

inline void apply_phase(QaoaState& state, std::span<const double> energies, double gamma) {
  auto amp = state.amplitudes();
  if (energies.size() != amp.size()) throw DimensionError("energy vector does not match state dimension");
  for (std::size_t m = 0; m < amp.size(); ++m) amp[m] *= std::polar(1.0, -gamma * energies[m]);
}

// exp(-i beta X) on every qubit: [[cos b, -i sin b], [-i sin b, cos b]].
inline void apply_mixer(QaoaState& state, double beta) {
  auto amp = state.amplitudes();
  const double c = std::cos(beta);
  const Amplitude mis(0.0, -std::sin(beta));
  for (std::size_t h = 1; h < amp.size(); h <<= 1) {
    for (std::size_t i = 0; i < amp.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Amplitude a = amp[j];
        const Amplitude b = amp[j + h];
        amp[j] = c * a + mis * b;
        amp[j + h] = mis * a + c * b;
      }
    }
  }
}

inline QaoaState run_circuit(std::span<const double> energies, const QaoaParams& params) {
  if (!std::has_single_bit(energies.size())) throw DimensionError("energy vector length must be a power of two");
  QaoaState state = QaoaState::uniform(static_cast<std::size_t>(std::countr_zero(energies.size())));
  for (std::size_t k = 0; k < params.depth(); ++k) {
    apply_phase(state, energies, params.gammas()[k]);
    apply_mixer(state, params.betas()[k]);
  }
  return state;
}

inline double expectation(const QaoaState& state, std::span<const double> energies) {
  const auto amp = state.amplitudes();
  if (energies.size() != amp.size()) throw DimensionError("energy vector does not match state dimension");
  double e = 0.0;
  for (std::size_t m = 0; m < amp.size(); ++m) e += std::norm(amp[m]) * energies[m];
  return e;
}

inline double approximation_ratio(double expect, double e_min) {
  if (e_min == 0.0) throw UndefinedRatioError("approximation ratio undefined for a zero minimum energy");
  return expect / e_min;
}

// Expectation as a function of flat parameters, reusing one state buffer. Energies with
// few distinct levels (the usual case for MaxCut-derived instances) get their phase
// factors computed once per level.
class QaoaObjective {
 public:
  explicit QaoaObjective(std::vector<double> energies) : energies_(std::move(energies)) {
    if (!std::has_single_bit(energies_.size())) throw DimensionError("energy vector length must be a power of two");
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(energies_.size()));
    levels_ = energies_;
    std::sort(levels_.begin(), levels_.end());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    if (levels_.size() * 4 <= energies_.size()) {
      level_of_.resize(energies_.size());
      for (std::size_t m = 0; m < energies_.size(); ++m) {
        level_of_[m] = static_cast<std::uint32_t>(std::lower_bound(levels_.begin(), levels_.end(), energies_[m]) -
                                                  levels_.begin());
      }
      phases_.resize(levels_.size());
    }
    state_ = QaoaState::uniform(num_qubits_);
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::span<const double> energies() const noexcept { return energies_; }

  double operator()(std::span<const double> flat) {
    const auto params = QaoaParams::from_flat(flat);
    auto amp = state_.amplitudes();
    std::fill(amp.begin(), amp.end(), Amplitude(1.0 / std::sqrt(static_cast<double>(amp.size())), 0.0));
    for (std::size_t k = 0; k < params.depth(); ++k) {
      const double gamma = params.gammas()[k];
      if (level_of_.empty()) {
        apply_phase(state_, energies_, gamma);
      } else {
        for (std::size_t l = 0; l < levels_.size(); ++l) phases_[l] = std::polar(1.0, -gamma * levels_[l]);
        for (std::size_t m = 0; m < amp.size(); ++m) amp[m] *= phases_[level_of_[m]];
      }
      apply_mixer(state_, params.betas()[k]);
    }
    return expectation(state_, energies_);
  }

 private:
  std::vector<double> energies_;
  std::size_t num_qubits_ = 0;
  std::vector<double> levels_;
  std::vector<std::uint32_t> level_of_;
  std::vector<Amplitude> phases_;
  QaoaState state_;
};

struct QaoaOptimizeOptions {
  std::size_t depth = 4;
  std::size_t budget = 10000;  // total objective evaluations across all starts
  std::size_t starts = 10;
  std::uint64_t seed = 0;
  std::optional<double> e_min;          // enables ratio reporting
  std::vector<QaoaParams> warm_starts;  // used as the first starting points
  double initial_step = 0.25;
};

struct QaoaOptimizeResult {
  QaoaParams best_params;
  double best_expectation = 0.0;
  std::optional<double> best_ratio;
  std::size_t evals_used = 0;
  std::vector<double> trace;  // expectation of every evaluation, in order
};

// Multistart local search: `starts` initial points (warm starts first, then random
// gamma in [0, 2pi), beta in [0, pi)), each refined by Nelder-Mead on its share of the
// budget, restarting from its best point whenever the simplex converges early.
inline QaoaOptimizeResult optimize_qaoa(std::vector<double> energies, const QaoaOptimizeOptions& opts) {
  if (opts.budget < opts.starts) throw ParameterError("evaluation budget must be at least the number of starts");
  const std::size_t starts = std::max(opts.starts, opts.warm_starts.size());
  for (const auto& w : opts.warm_starts) {
    if (w.depth() != opts.depth) throw DimensionError("warm start depth differs from requested depth");
  }
  QaoaObjective objective(std::move(energies));
  QaoaOptimizeResult result;
  result.best_expectation = std::numeric_limits<double>::infinity();
  Objective traced = [&](std::span<const double> x) {
    const double e = objective(x);
    result.trace.push_back(e);
    if (e < result.best_expectation) {
      result.best_expectation = e;
      result.best_params = QaoaParams::from_flat(x);
    }
    return e;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> gamma_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> beta_dist(0.0, std::numbers::pi);
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> x0;
    if (s < opts.warm_starts.size()) {
      x0 = opts.warm_starts[s].flat();
    } else {
      x0.resize(2 * opts.depth);
      for (std::size_t k = 0; k < opts.depth; ++k) x0[k] = gamma_dist(rng);
      for (std::size_t k = 0; k < opts.depth; ++k) x0[opts.depth + k] = beta_dist(rng);
    }
    std::size_t share = opts.budget / starts + (s < opts.budget % starts ? 1 : 0);
    while (share > 0) {
      NelderMeadOptions nm;
      nm.max_evals = share;
      nm.initial_step = opts.initial_step;
      const auto r = nelder_mead(traced, x0, nm);
      share -= r.evals;
      x0 = r.x;
      if (!r.converged) break;
    }
  }
  result.evals_used = result.trace.size();
  if (opts.e_min) result.best_ratio = approximation_ratio(result.best_expectation, *opts.e_min);
  return result;
}

inline QaoaOptimizeResult optimize_qaoa(const PuboPolynomial& poly, const QaoaOptimizeOptions& opts,
                                        std::size_t max_qubits = kDefaultMaxQubits) {
  return optimize_qaoa(diagonal_energies(poly, max_qubits), opts);
}

}  // namespace dnc
