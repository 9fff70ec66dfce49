#pragma once

// First-order form of u_tt = beta * (u + eps^p u^{p+1})_xx:
//   u_t = K v_x,   v_t = K u_x + eps^p K (u^{p+1})_x
// with K the square root of convolution by beta. Fourier sign convention:
// u_hat_t = i theta v_hat, v_hat_t = i theta u_hat, theta = xi sqrt(beta_hat).

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/spectral.hpp"

namespace nlwave {

/// Fixed choice of the regularity threshold s0 > 1/2.
inline constexpr double kS0 = 0.6;

struct State {
  Field u;
  Field v;
  double t = 0.0;

  const Grid& grid() const noexcept { return u.grid(); }
};

/// A pair (u, v) without a time stamp, used for perturbation directions.
using FieldPair = std::pair<Field, Field>;

/// sqrt(|u|_{H^s}^2 + |v|_{H^s}^2).
double xs_norm(const Field& u, const Field& v, double s);
double xs_norm(const State& st, double s);

struct EvolutionParams {
  Kernel kernel = builtin_kernel("dirac");
  double epsilon = 0.1;
  int power = 1;
  double s = 2.0;
  /// When false the eps^p u^{p+1} term is dropped (the linear problem).
  bool nonlinear = true;

  double eps_p() const;
  /// Throws ConfigError unless eps > 0, p >= 1 and s >= s0 + 1.
  void validate() const;
};

/// Grid-bound evaluator of the system: caches the K and K D_x tables and
/// offers the propagator, right-hand sides and integrators.
class WaveSystem {
 public:
  WaveSystem(const Grid& grid, EvolutionParams params);

  const Grid& grid() const noexcept { return grid_; }
  const EvolutionParams& params() const noexcept { return params_; }

  /// Exact flow of the linear part for Delta tau (any sign). With scaled =
  /// true the rotation rate is theta / eps^p.
  State linear_propagate(const State& st, double dtau, bool scaled = false) const;

  /// (K v_x, K u_x + eps^p K D_x u^{p+1}); BlowupDetected on non-finite input.
  FieldPair rhs(const State& st) const;

  /// N[u] = (0, -eps^p K D_x u^{p+1}).
  FieldPair nonlinear_map(const State& st) const;
  /// N_u[u] phi = (0, -(p+1) eps^p K D_x(u^p phi_1)).
  FieldPair jacobian_apply(const State& st, const FieldPair& phi) const;
  /// N_uu[u](phi, psi) = (0, -p(p+1) eps^p K D_x(u^{p-1} phi_1 psi_1)).
  FieldPair hessian_apply(const State& st, const FieldPair& phi, const FieldPair& psi) const;

  State step_strang(const State& st, double dt) const;
  State step_rk4(const State& st, double dt) const;

  /// H = 1/2 |u|^2 + 1/2 |v|^2 + eps^p/(p+2) int u^{p+2}.
  double hamiltonian(const State& st) const;

  /// 0.5 / max |xi| sqrt(beta_hat) over the band (physical time).
  double default_dt() const;

  const SampledMultiplier& kdx() const noexcept { return kdx_; }

 private:
  // v_hat += scale * K D_x (u^{p+1})_hat, returning the new v.
  Field kick(const Field& u, const Field& v, double scale) const;
  void check_finite(const State& st) const;

  Grid grid_;
  EvolutionParams params_;
  SampledMultiplier k_;
  SampledMultiplier kdx_;
  std::vector<double> theta_;  // xi sqrt(beta_hat), Nyquist slot zero
};

// Free-function forms.
State linear_propagate(const State& st, double dtau, const EvolutionParams& prm, bool scaled);
FieldPair nonlinear_rhs(const State& st, const EvolutionParams& prm);
FieldPair jacobian_apply(const State& st, const FieldPair& phi, const EvolutionParams& prm);
FieldPair hessian_apply(const State& st, const FieldPair& phi, const FieldPair& psi,
                        const EvolutionParams& prm);
State step_strang(const State& st, double dt, const EvolutionParams& prm);
State step_rk4(const State& st, double dt, const EvolutionParams& prm);

/// Classical four-stage Runge-Kutta step for y' = f(y) on any vector space
/// type providing axpy-style combination through the `combine` callback.
template <class Y, class Rhs, class Combine>
Y rk4_step(const Y& y, double dt, Rhs&& f, Combine&& combine) {
  // combine(y, {(alpha_i, k_i)...}) = y + sum alpha_i k_i
  const Y k1 = f(y);
  const Y k2 = f(combine(y, {{0.5 * dt, &k1}}));
  const Y k3 = f(combine(y, {{0.5 * dt, &k2}}));
  const Y k4 = f(combine(y, {{dt, &k3}}));
  return combine(y, {{dt / 6.0, &k1}, {dt / 3.0, &k2}, {dt / 3.0, &k3}, {dt / 6.0, &k4}});
}

/// E_s^2 = 1/2 (|u|_s^2 + |v|_s^2 + eps^p <u, w u>_{H^s}) with a dealiased w u.
double energy_squared(const Field& u, const Field& v, const Field& w, double eps_p, double s);

// ---------------------------------------------------------------------------
// Linearized system in scaled time:
//   u_tau = (1/eps^p) K v_x + f1
//   v_tau = (1/eps^p) K u_x + K (w u)_x + f2

struct LinearizedProblem {
  /// One entry: w frozen in tau. Several: samples on the dt lattice, linear in between.
  std::vector<Field> w;
  FieldPair forcing;
  FieldPair initial;

  Field w_at(double tau, double dt) const;
};

struct LinearizedTrajectory {
  std::vector<State> states;   ///< includes the initial state; t holds tau
  std::vector<double> energy;  ///< E_s at each stored state
};

/// Strang splitting: exact scaled propagator plus an exact kick for the
/// forcing and w-terms with w, f frozen at the kick time.
LinearizedTrajectory solve_linearized(const LinearizedProblem& problem, const EvolutionParams& prm,
                                      double tau_end, double dt, int store_every = 1);

// ---------------------------------------------------------------------------
// Initial data

/// u1 = (w0)_x with v0 = K^{-1} w0 (requires ellipticity).
struct DisplacementRate {
  Field w0;
};
/// v0 supplied directly, u1 = (K v0)_x.
struct DirectVelocity {
  Field v0;
};

State convert_initial_data(const Field& u0, const std::variant<DisplacementRate, DirectVelocity>& u1,
                           const Kernel& kernel);

/// Raw stencil on periodic samples with a shift of `shift` nodes.
void lattice_laplacian(std::span<const double> z, int shift, std::span<double> out);
/// z(x-1) - 2 z(x) + z(x+1) on a grid whose spacing divides 1. ConfigError otherwise.
Field lattice_laplacian(const Field& z);
/// Number of nodes in a unit shift, or ConfigError.
int unit_shift_nodes(const Grid& grid);

}  // namespace nlwave
