#include "nlwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "nlwave/errors.hpp"

namespace nlwave {

double xs_norm(const Field& u, const Field& v, double s) {
  return std::hypot(sobolev_norm(u, s), sobolev_norm(v, s));
}

double xs_norm(const State& st, double s) { return xs_norm(st.u, st.v, s); }

double EvolutionParams::eps_p() const { return std::pow(epsilon, power); }

void EvolutionParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (power < 1) throw ConfigError("p must be a positive integer");
  if (!(s >= kS0 + 1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "s must satisfy s >= s0 + 1 = " << kS0 + 1.0 << ", got " << s;
    throw ConfigError(msg.str());
  }
}

namespace {

void require_pair_grid(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw ContractError("u and v must share one grid");
}

FieldPair combine_pairs(const FieldPair& y, std::initializer_list<std::pair<double, const FieldPair*>> terms) {
  Field u = y.first;
  Field v = y.second;
  for (const auto& [alpha, k] : terms) {
    u = axpy(alpha, k->first, u);
    v = axpy(alpha, k->second, v);
  }
  return {std::move(u), std::move(v)};
}

}  // namespace

WaveSystem::WaveSystem(const Grid& grid, EvolutionParams params)
    : grid_(grid),
      params_(std::move(params)),
      k_(k_multiplier(params_.kernel, grid)),
      kdx_(kdx_multiplier(params_.kernel, grid)),
      theta_(static_cast<std::size_t>(grid.half_size()), 0.0) {
  params_.validate();
  for (int m = 0; m < grid.size() / 2; ++m) {
    theta_[static_cast<std::size_t>(m)] = kdx_.values()[static_cast<std::size_t>(m)].imag();
  }
}

State WaveSystem::linear_propagate(const State& st, double dtau, bool scaled) const {
  require_pair_grid(st.u, st.v);
  const double rate = scaled ? 1.0 / params_.eps_p() : 1.0;
  const auto uh = st.u.half_spectrum();
  const auto vh = st.v.half_spectrum();
  std::vector<Complex> u2(uh.size());
  std::vector<Complex> v2(vh.size());
  const Complex i{0.0, 1.0};
  for (std::size_t m = 0; m < uh.size(); ++m) {
    const double a = theta_[m] * rate * dtau;
    const double c = std::cos(a);
    const Complex is = i * std::sin(a);
    u2[m] = c * uh[m] + is * vh[m];
    v2[m] = is * uh[m] + c * vh[m];
  }
  return {Field::from_half_spectrum(grid_, std::move(u2)),
          Field::from_half_spectrum(grid_, std::move(v2)), st.t + dtau};
}

void WaveSystem::check_finite(const State& st) const {
  if (!st.u.all_finite() || !st.v.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite sample at t = " << st.t;
    throw BlowupDetected(msg.str(), st.t);
  }
}

Field WaveSystem::kick(const Field& u, const Field& v, double scale) const {
  const Field w = dealias_power(u, params_.power + 1);
  std::vector<Complex> vh(v.half_spectrum().begin(), v.half_spectrum().end());
  const auto wh = w.half_spectrum();
  const auto mult = kdx_.values();
  for (std::size_t m = 0; m < vh.size(); ++m) vh[m] += scale * mult[m] * wh[m];
  return Field::from_half_spectrum(grid_, std::move(vh));
}

FieldPair WaveSystem::rhs(const State& st) const {
  require_pair_grid(st.u, st.v);
  check_finite(st);
  Field du = kdx_.apply(st.v);
  std::vector<Complex> h(st.u.half_spectrum().begin(), st.u.half_spectrum().end());
  if (params_.nonlinear) {
    const Field w = dealias_power(st.u, params_.power + 1);
    const double e = params_.eps_p();
    const auto wh = w.half_spectrum();
    for (std::size_t m = 0; m < h.size(); ++m) h[m] += e * wh[m];
  }
  kdx_.apply_in_place(h);
  Field dv = Field::from_half_spectrum(grid_, std::move(h));
  if (!dv.all_finite()) {
    std::ostringstream msg;
    msg << "overflow in u^(p+1) at t = " << st.t;
    throw BlowupDetected(msg.str(), st.t);
  }
  return {std::move(du), std::move(dv)};
}

FieldPair WaveSystem::nonlinear_map(const State& st) const {
  const Field w = dealias_power(st.u, params_.power + 1);
  return {Field::zeros(grid_), (-params_.eps_p()) * kdx_.apply(w)};
}

FieldPair WaveSystem::jacobian_apply(const State& st, const FieldPair& phi) const {
  const int p = params_.power;
  std::vector<Field> factors(static_cast<std::size_t>(p), st.u);
  factors.push_back(phi.first);
  const Field prod = dealias_product(factors, p + 1);
  return {Field::zeros(grid_), (-(p + 1) * params_.eps_p()) * kdx_.apply(prod)};
}

FieldPair WaveSystem::hessian_apply(const State& st, const FieldPair& phi,
                                    const FieldPair& psi) const {
  const int p = params_.power;
  std::vector<Field> factors(static_cast<std::size_t>(p - 1), st.u);
  factors.push_back(phi.first);
  factors.push_back(psi.first);
  const Field prod = dealias_product(factors, p + 1);
  return {Field::zeros(grid_), (-p * (p + 1) * params_.eps_p()) * kdx_.apply(prod)};
}

State WaveSystem::step_strang(const State& st, double dt) const {
  if (!params_.nonlinear) return linear_propagate(st, dt);
  check_finite(st);
  const double half = 0.5 * dt * params_.eps_p();
  State mid = linear_propagate({st.u, kick(st.u, st.v, half), st.t}, dt);
  Field v = kick(mid.u, mid.v, half);
  State out{std::move(mid.u), std::move(v), mid.t};
  check_finite(out);
  return out;
}

State WaveSystem::step_rk4(const State& st, double dt) const {
  if (dt == 0.0) return st;
  const double t0 = st.t;
  auto f = [&](const FieldPair& y) { return rhs(State{y.first, y.second, t0}); };
  FieldPair y = rk4_step(FieldPair{st.u, st.v}, dt, f, combine_pairs);
  State out{std::move(y.first), std::move(y.second), st.t + dt};
  check_finite(out);
  return out;
}

double WaveSystem::hamiltonian(const State& st) const {
  double h = 0.5 * (l2_inner(st.u, st.u) + l2_inner(st.v, st.v));
  if (params_.nonlinear) {
    const int p = params_.power;
    h += params_.eps_p() / (p + 2) * integral_of_power(st.u, p + 2);
  }
  return h;
}

double WaveSystem::default_dt() const {
  double rate = 0.0;
  for (double th : theta_) rate = std::max(rate, std::abs(th));
  return rate > 0.0 ? 0.5 / rate : 0.5;
}

State linear_propagate(const State& st, double dtau, const EvolutionParams& prm, bool scaled) {
  return WaveSystem(st.grid(), prm).linear_propagate(st, dtau, scaled);
}

FieldPair nonlinear_rhs(const State& st, const EvolutionParams& prm) {
  return WaveSystem(st.grid(), prm).rhs(st);
}

FieldPair jacobian_apply(const State& st, const FieldPair& phi, const EvolutionParams& prm) {
  return WaveSystem(st.grid(), prm).jacobian_apply(st, phi);
}

FieldPair hessian_apply(const State& st, const FieldPair& phi, const FieldPair& psi,
                        const EvolutionParams& prm) {
  return WaveSystem(st.grid(), prm).hessian_apply(st, phi, psi);
}

State step_strang(const State& st, double dt, const EvolutionParams& prm) {
  if (!(dt > 0.0)) throw ConfigError("step_strang: dt must be positive");
  return WaveSystem(st.grid(), prm).step_strang(st, dt);
}

State step_rk4(const State& st, double dt, const EvolutionParams& prm) {
  return WaveSystem(st.grid(), prm).step_rk4(st, dt);
}

double energy_squared(const Field& u, const Field& v, const Field& w, double eps_p, double s) {
  const double nu = sobolev_norm(u, s);
  const double nv = sobolev_norm(v, s);
  const double cross = sobolev_inner(u, dealias_product(w, u), s);
  return 0.5 * (nu * nu + nv * nv + eps_p * cross);
}

// ---------------------------------------------------------------------------
// Linearized system

Field LinearizedProblem::w_at(double tau, double dt) const {
  if (w.empty()) throw ContractError("linearized problem has no w");
  if (w.size() == 1) return w.front();
  const double pos = tau / dt;
  const double last = static_cast<double>(w.size() - 1);
  if (pos < -1e-9 || pos > last + 1e-9) throw RangeError("w samples do not cover tau");
  const double clamped = std::clamp(pos, 0.0, last);
  const auto i = std::min(static_cast<std::size_t>(clamped), w.size() - 2);
  const double frac = clamped - static_cast<double>(i);
  if (frac == 0.0) return w[i];
  return axpy(frac, w[i + 1] - w[i], w[i]);
}

LinearizedTrajectory solve_linearized(const LinearizedProblem& problem, const EvolutionParams& prm,
                                      double tau_end, double dt, int store_every) {
  if (!(dt > 0.0)) throw ConfigError("solve_linearized: dt must be positive");
  if (!(tau_end >= 0.0)) throw ConfigError("solve_linearized: tau_end must be nonnegative");
  if (store_every < 1) throw ConfigError("solve_linearized: store_every must be >= 1");
  const Grid& grid = problem.initial.first.grid();
  EvolutionParams linear = prm;
  linear.nonlinear = false;
  const WaveSystem sys(grid, linear);
  const double e = prm.eps_p();
  const auto& kdx = sys.kdx();
  const Field& f1 = problem.forcing.first;
  const Field& f2 = problem.forcing.second;

  const auto steps = static_cast<long long>(std::ceil(tau_end / dt - 1e-9));
  const double h = steps > 0 ? tau_end / static_cast<double>(steps) : dt;

  // Exact flow of u_tau = f1, v_tau = K D_x(w u) + f2 over sigma with w frozen.
  auto kick = [&](const State& st, double tau, double sigma) {
    const Field w = problem.w_at(tau, dt);
    Field u = axpy(sigma, f1, st.u);
    Field v = axpy(sigma, kdx.apply(dealias_product(w, st.u)) + f2, st.v);
    v = axpy(0.5 * sigma * sigma, kdx.apply(dealias_product(w, f1)), v);
    if (!u.all_finite() || !v.all_finite()) {
      throw BlowupDetected("non-finite value in the linearized solve", tau);
    }
    return State{std::move(u), std::move(v), st.t};
  };
  auto energy = [&](const State& st) {
    const double e2 = energy_squared(st.u, st.v, problem.w_at(st.t, dt), e, prm.s);
    return e2 >= 0.0 ? std::sqrt(e2) : std::numeric_limits<double>::quiet_NaN();
  };

  LinearizedTrajectory out;
  State st{problem.initial.first, problem.initial.second, 0.0};
  out.states.push_back(st);
  out.energy.push_back(energy(st));
  for (long long n = 0; n < steps; ++n) {
    const double tau0 = static_cast<double>(n) * h;
    const double tau1 = static_cast<double>(n + 1) * h;
    st = kick(st, tau0, 0.5 * h);
    st = sys.linear_propagate(st, h, /*scaled=*/true);
    st = kick(st, tau1, 0.5 * h);
    st.t = tau1;
    if ((n + 1) % store_every == 0 || n + 1 == steps) {
      out.states.push_back(st);
      out.energy.push_back(energy(st));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Initial data and the lattice operator

State convert_initial_data(const Field& u0, const std::variant<DisplacementRate, DirectVelocity>& u1,
                           const Kernel& kernel) {
  if (const auto* direct = std::get_if<DirectVelocity>(&u1)) {
    return {u0, direct->v0, 0.0};
  }
  const auto& rate = std::get<DisplacementRate>(u1);
  try {
    return {u0, apply_K_inverse(kernel, rate.w0), 0.0};
  } catch (const NonElliptic& e) {
    throw NonElliptic(std::string(e.what()) +
                          "; give v0 directly instead, so that u1 = (K v0)_x",
                      e.wavenumber(), e.symbol_value());
  }
}

int unit_shift_nodes(const Grid& grid) {
  const double m = 1.0 / grid.spacing();
  const double r = std::round(m);
  if (r < 1.0 || std::abs(m - r) > 1e-9 * m) {
    std::ostringstream msg;
    msg << "lattice operator needs 1/dx to be an integer, got 1/dx = " << m;
    throw ConfigError(msg.str());
  }
  return static_cast<int>(r);
}

void lattice_laplacian(std::span<const double> z, int shift, std::span<double> out) {
  const auto n = static_cast<long long>(z.size());
  const long long s = shift % n;
  for (long long j = 0; j < n; ++j) {
    const double left = z[static_cast<std::size_t>((j - s + n) % n)];
    const double right = z[static_cast<std::size_t>((j + s) % n)];
    out[static_cast<std::size_t>(j)] = left - 2.0 * z[static_cast<std::size_t>(j)] + right;
  }
}

Field lattice_laplacian(const Field& z) {
  const int shift = unit_shift_nodes(z.grid());
  std::vector<double> out(z.samples().size());
  lattice_laplacian(z.samples(), shift, out);
  return Field::from_samples(z.grid(), std::move(out));
}

}  // namespace nlwave
