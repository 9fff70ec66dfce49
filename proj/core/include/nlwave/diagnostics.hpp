#pragma once

// Energy functionals, hyperbolicity and data functionals, empirical probes of
// the product / commutator / nonlinear estimates, and the regularity-loss
// arithmetic of the Nash-Moser scheme.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlwave/dynamics.hpp"

namespace nlwave {

struct EnergyReport {
  double s = 0.0;
  double Es = 0.0;
  double Xs_norm = 0.0;    ///< sqrt(|u|_s^2 + |v|_s^2)
  double sum_norm = 0.0;   ///< |u|_s + |v|_s
  bool equivalence_ok = false;
  double epsilon_used = 0.0;
};

/// E_s for the pair (u, v) with weight w. Throws HyperbolicityLost if E_s^2 < 0.
/// equivalence_ok holds when sum_norm / (2 sqrt 2) <= Es <= sqrt(3)/2 sum_norm.
EnergyReport energy_Es(const State& st, const Field& w, double epsilon, int p, double s);

struct HyperbolicityResult {
  double min_value = 1.0;
  bool ok = true;
};
/// min_j (1 + eps^p w_j).
HyperbolicityResult hyperbolicity_check(const Field& w, double epsilon, int p);

/// Calibrated algebra constant: max moser_probe ratio over a seeded corpus.
struct AlgebraConstant {
  double value = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;
};
inline constexpr std::uint64_t kCalibrationSeed = 20240611;
inline constexpr int kCalibrationSamples = 1000;
AlgebraConstant calibrate_algebra_constant(const Grid& grid, double s,
                                           std::uint64_t seed = kCalibrationSeed,
                                           int samples = kCalibrationSamples);

/// (1 / (2 C |w|_{H^s}))^{1/p}; +infinity when |w| = 0.
double epsilon0_estimate(const Field& w, double s, int p, double algebra_constant);
/// Same, calibrating the constant on w's grid with the default corpus.
double epsilon0_estimate(const Field& w, double s, int p);

double hamiltonian(const State& st, double epsilon, int p);

/// |g|_{X^s} + int_0^t sup_{t' <= t''} |f(t')|_{X^s} dt'' from norms sampled on
/// a uniform lattice of spacing dt starting at 0. RangeError if t exceeds coverage.
double data_functional_I(double g_norm, std::span<const double> f_norms, double dt, double t);
double data_functional_I(const FieldPair& g, std::span<const FieldPair> f_series, double dt,
                         double s, double t);

/// |fg|_s / (|f|_{s0} |g|_s + |f|_s |g|_{s0}). UndefinedRatio if the denominator is 0.
double moser_probe(const Field& f, const Field& g, double s, double s0);
/// |[Lambda^s, f] u|_{H^r} / (|f_x|_{s0} |u|_{s+r-1} + |f_x|_{s+r-1} |u|_{s0}).
double kato_probe(const Field& f, const Field& u, double s, double s0, double r);

enum class NonlinearEstimate { N, N_u, N_uu };

/// Direct evaluation of the nonlinear map N[u] = (0, -K D_x u^{p+1}) and its derivatives.
FieldPair nonlinear_term(const Kernel& k, const FieldPair& u, int p);
FieldPair nonlinear_term_u(const Kernel& k, const FieldPair& u, const FieldPair& phi, int p);
FieldPair nonlinear_term_uu(const Kernel& k, const FieldPair& u, const FieldPair& phi,
                            const FieldPair& psi, int p);

/// Left side over the right side (C = 1) of the chosen nonlinear estimate.
double nonlinear_estimate_probe(const Kernel& k, const FieldPair& u, const FieldPair& phi,
                                const FieldPair& psi, double s, double s0, int p,
                                NonlinearEstimate which);

/// Outcome of a randomized probe campaign.
struct ProbeReport {
  std::string probe;
  int samples = 0;
  std::uint64_t seed = 0;
  double empirical_C = 0.0;
  std::string max_ratio_input_hash;
  int max_ratio_index = -1;
  bool all_finite = true;
};

struct ProbeSuiteConfig {
  double half_length = 3.141592653589793;
  int n_points = 256;
  double s = 2.0;
  double s0 = kS0;
  double r = 1.0;
  int p = 2;
  int samples = 1000;
  std::uint64_t seed = 7;
  int max_mode = 12;
  int workers = 1;
};

/// Names: "moser", "kato", "as-21", "as-22", "as-23".
std::vector<std::string> probe_names();
ProbeReport run_probe_suite(const std::string& probe, const ProbeSuiteConfig& cfg);

/// FNV-1a over the raw bytes of the samples, as 16 hex digits.
std::string hash_fields(std::span<const Field> fields);

struct NashMoserParams {
  int m = 3;
  int d1 = 1;
  int d1_prime = 0;
  double D = 0.0;
  double delta = 0.0;
  double q = 0.0;
  double P_min = 0.0;
};

/// delta = max(d1, d1' + m), q = D - m - d1', P_min = delta + (D/q)(sqrt(delta) + sqrt(2(delta+q)))^2.
NashMoserParams nash_moser_params(double D);

struct PminOptimum {
  double D_star = 0.0;
  double P_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};
/// Golden-section minimization of P_min over D in (3, 100].
PminOptimum optimize_pmin(double tolerance = 1e-6);

}  // namespace nlwave
