#pragma once

// Scripted studies built on the dynamics: epsilon sweeps for escape times,
// the U = eps u identity, the lattice cross-check, growth-rate fits for the
// linearized problem and integrator self-convergence.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nlwave/dynamics.hpp"

namespace nlwave {

/// u0 = amplitude * exp(-x^2), v0 = 0.
State gaussian_state(const Grid& grid, double amplitude = 1.0);

enum class Integrator { Strang, RK4 };
Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

struct SweepResult {
  double epsilon = 0.0;
  int p = 1;
  double s = 2.0;
  double T_esc = 0.0;    ///< physical time; T_cap / eps^p when cap_hit
  double product = 0.0;  ///< T_esc * eps^p
  bool cap_hit = false;
  bool blowup = false;   ///< escape triggered by a non-finite sample
};

struct SweepConfig {
  Grid grid{20.0, 512};
  Kernel kernel = builtin_kernel("dirac");
  int p = 1;
  double s = 2.0;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  double T_cap = 5.0;   ///< scaled time
  double M = 10.0;
  double dt = 0.0;      ///< physical step; 0 picks WaveSystem::default_dt
  bool nonlinear = true;
  Integrator integrator = Integrator::Strang;
  int workers = 0;      ///< 0: hardware concurrency
  std::function<State(const Grid&)> initial = [](const Grid& g) { return gaussian_state(g); };
};

/// One result per epsilon, ordered by decreasing epsilon. ConfigError on a
/// nonpositive epsilon, T_cap or M.
std::vector<SweepResult> longtime_sweep(const SweepConfig& cfg);

/// max over steps and nodes of |U - eps u| where u solves the eps-form with
/// (u0, v0) and U the eps-free form with (eps u0, eps v0), both by Strang.
double scaling_equivalence_check(const Field& u0, const Field& v0, const Kernel& kernel, int p,
                                 double epsilon, double t_end, double dt);

struct CrosscheckConfig {
  int p = 1;
  double epsilon = 0.1;
  double t_end = 5.0;
  double dt = 0.02;
  int samples = 10;      ///< comparison times t_end * i / samples
  bool nonlinear = true;
};

struct CrosscheckRow {
  double t = 0.0;
  double deviation = 0.0;
};

struct CrosscheckResult {
  std::vector<CrosscheckRow> rows;
  double max_deviation = 0.0;
};

/// Triangular-kernel spectral run (RK4 on (u, v)) against a method-of-lines
/// RK4 run of z_tt = Delta(z + eps^p z^{p+1}) with z_t(0) = K (v0)_x.
/// ConfigError unless 1/dx is an integer.
CrosscheckResult lattice_crosscheck(const Field& u0, const Field& v0, const CrosscheckConfig& cfg);

struct GrowthFitConfig {
  double s = 2.0;
  int p = 1;
  std::vector<double> epsilons{0.1, 0.05};
  double t_end = 0.25;    ///< physical fit window, shared by every epsilon
  double dt = 0.0;        ///< scaled step; 0 picks 0.25 * eps^p * default_dt
  std::uint64_t seed = 11;
  int max_mode = 6;
};

struct GrowthFit {
  double epsilon = 0.0;
  double slope = 0.0;       ///< d log E_s / dt in physical time
  double t_end = 0.0;
};

/// Least-squares slope of log E_s against physical time t for the linearized
/// problem with frozen w, f = 0 and seeded random data g, over [0, t_end] in
/// physical time (scaled horizon t_end * eps^p).
std::vector<GrowthFit> linearized_growth_fit(const Field& w, const Kernel& kernel,
                                             const GrowthFitConfig& cfg);

struct ConvergenceConfig {
  EvolutionParams params;
  Integrator integrator = Integrator::Strang;
  double t_end = 1.0;
};

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;     ///< max |difference| against the finest run
  std::vector<double> orders;     ///< log2 of successive Richardson difference ratios
  double observed_order = 0.0;    ///< order from the coarsest triple
  /// For linear runs, max error of each run against the exact propagator.
  std::vector<double> exact_errors;
};

/// dt_list must halve at every entry and hold at least 4 values, each
/// dividing t_end. ConfigError otherwise.
ConvergenceResult convergence_study(const State& initial, const ConvergenceConfig& cfg,
                                    const std::vector<double>& dt_list);

/// Advances st by n steps of dt with the chosen integrator.
State integrate(const WaveSystem& sys, State st, double dt, long long steps, Integrator integrator);

}  // namespace nlwave
