#include "nlwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "nlwave/diagnostics.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/random_fields.hpp"

namespace nlwave {

State gaussian_state(const Grid& grid, double amplitude) {
  return {Field::from_function(grid, [amplitude](double x) { return amplitude * std::exp(-x * x); }),
          Field::zeros(grid), 0.0};
}

Integrator parse_integrator(const std::string& name) {
  if (name == "strang") return Integrator::Strang;
  if (name == "rk4") return Integrator::RK4;
  throw ConfigError("unknown integrator '" + name + "' (expected strang or rk4)");
}

std::string to_string(Integrator integrator) {
  return integrator == Integrator::Strang ? "strang" : "rk4";
}

State integrate(const WaveSystem& sys, State st, double dt, long long steps, Integrator integrator) {
  for (long long n = 0; n < steps; ++n) {
    st = integrator == Integrator::Strang ? sys.step_strang(st, dt) : sys.step_rk4(st, dt);
  }
  return st;
}

namespace {

long long step_count(double t_end, double dt) {
  return static_cast<long long>(std::ceil(t_end / dt - 1e-9));
}

template <class Job>
void run_jobs(std::size_t count, int workers, Job&& job) {
  std::size_t n = workers > 0 ? static_cast<std::size_t>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SweepResult sweep_point(const SweepConfig& cfg, double epsilon) {
  EvolutionParams prm;
  prm.kernel = cfg.kernel;
  prm.epsilon = epsilon;
  prm.power = cfg.p;
  prm.s = cfg.s;
  prm.nonlinear = cfg.nonlinear;
  const WaveSystem sys(cfg.grid, prm);

  SweepResult res;
  res.epsilon = epsilon;
  res.p = cfg.p;
  res.s = cfg.s;
  const double eps_p = prm.eps_p();
  const double horizon = cfg.T_cap / eps_p;
  const double dt0 = cfg.dt > 0.0 ? cfg.dt : sys.default_dt();
  const long long steps = step_count(horizon, dt0);
  const double dt = horizon / static_cast<double>(steps);

  State st = cfg.initial(cfg.grid);
  const double threshold = cfg.M * std::max(1.0, xs_norm(st, cfg.s));
  for (long long n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    try {
      st = cfg.integrator == Integrator::Strang ? sys.step_strang(st, dt) : sys.step_rk4(st, dt);
    } catch (const BlowupDetected&) {
      res.T_esc = t;
      res.blowup = true;
      break;
    }
    const double norm = xs_norm(st, cfg.s);
    if (!std::isfinite(norm) || norm > threshold) {
      res.T_esc = t;
      res.blowup = !std::isfinite(norm);
      break;
    }
  }
  if (res.T_esc == 0.0) {
    res.T_esc = horizon;
    res.cap_hit = true;
  }
  res.product = res.cap_hit ? cfg.T_cap : res.T_esc * eps_p;
  return res;
}

}  // namespace

std::vector<SweepResult> longtime_sweep(const SweepConfig& cfg) {
  if (cfg.epsilons.empty()) throw ConfigError("sweep needs at least one epsilon");
  for (double e : cfg.epsilons) {
    if (!(e > 0.0)) throw ConfigError("sweep epsilons must be positive");
  }
  if (!(cfg.T_cap > 0.0)) throw ConfigError("T_cap must be positive");
  if (!(cfg.M > 1.0)) throw ConfigError("M must exceed 1");
  if (cfg.dt < 0.0) throw ConfigError("dt must be nonnegative");

  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  std::vector<SweepResult> out(eps.size());
  run_jobs(eps.size(), cfg.workers, [&](std::size_t i) { out[i] = sweep_point(cfg, eps[i]); });
  return out;
}

double scaling_equivalence_check(const Field& u0, const Field& v0, const Kernel& kernel, int p,
                                 double epsilon, double t_end, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  EvolutionParams small;
  small.kernel = kernel;
  small.epsilon = epsilon;
  small.power = p;
  EvolutionParams unit = small;
  unit.epsilon = 1.0;
  const WaveSystem a(u0.grid(), small);
  const WaveSystem b(u0.grid(), unit);

  State u{u0, v0, 0.0};
  State U{epsilon * u0, epsilon * v0, 0.0};
  auto deviation = [&] {
    double d = 0.0;
    const auto us = u.u.samples();
    const auto Us = U.u.samples();
    for (std::size_t j = 0; j < us.size(); ++j) d = std::max(d, std::abs(Us[j] - epsilon * us[j]));
    return d;
  };
  double worst = deviation();
  const long long steps = step_count(t_end, dt);
  for (long long n = 0; n < steps; ++n) {
    u = a.step_strang(u, dt);
    U = b.step_strang(U, dt);
    worst = std::max(worst, deviation());
  }
  return worst;
}

CrosscheckResult lattice_crosscheck(const Field& u0, const Field& v0, const CrosscheckConfig& cfg) {
  const Grid& grid = u0.grid();
  const int shift = unit_shift_nodes(grid);
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) || cfg.samples < 1) {
    throw ConfigError("crosscheck needs dt > 0, t_end >= 0 and samples >= 1");
  }
  EvolutionParams prm;
  prm.kernel = builtin_kernel("triangular");
  prm.epsilon = cfg.epsilon;
  prm.power = cfg.p;
  prm.nonlinear = cfg.nonlinear;
  const WaveSystem sys(grid, prm);
  const double e = cfg.nonlinear ? prm.eps_p() : 0.0;
  const int p = cfg.p;

  // Lattice state (z, z_t) as plain sample vectors.
  using Vec = std::vector<double>;
  using Pair = std::pair<Vec, Vec>;
  const std::size_t n = static_cast<std::size_t>(grid.size());
  auto lattice_rhs = [&](const Pair& y) {
    Vec stress(n);
    for (std::size_t j = 0; j < n; ++j) stress[j] = y.first[j] + e * std::pow(y.first[j], p + 1);
    Vec acc(n);
    lattice_laplacian(stress, shift, acc);
    return Pair{y.second, std::move(acc)};
  };
  auto combine = [&](const Pair& y, std::initializer_list<std::pair<double, const Pair*>> terms) {
    Pair out = y;
    for (const auto& [alpha, k] : terms) {
      for (std::size_t j = 0; j < n; ++j) {
        out.first[j] += alpha * k->first[j];
        out.second[j] += alpha * k->second[j];
      }
    }
    return out;
  };

  const Field z_t0 = apply_KDx(prm.kernel, v0);
  Pair z{Vec(u0.samples().begin(), u0.samples().end()), Vec(z_t0.samples().begin(), z_t0.samples().end())};
  State st{u0, v0, 0.0};

  CrosscheckResult res;
  const long long total = step_count(cfg.t_end, cfg.dt);
  const double dt = total > 0 ? cfg.t_end / static_cast<double>(total) : cfg.dt;
  long long done = 0;
  for (int i = 1; i <= cfg.samples; ++i) {
    const long long target = total * i / cfg.samples;
    for (; done < target; ++done) {
      st = sys.step_rk4(st, dt);
      z = rk4_step(z, dt, lattice_rhs, combine);
    }
    double dev = 0.0;
    const auto us = st.u.samples();
    for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(us[j] - z.first[j]));
    res.rows.push_back({static_cast<double>(done) * dt, dev});
    res.max_deviation = std::max(res.max_deviation, dev);
  }
  return res;
}

std::vector<GrowthFit> linearized_growth_fit(const Field& w, const Kernel& kernel,
                                             const GrowthFitConfig& cfg) {
  if (cfg.epsilons.empty()) throw ConfigError("growth fit needs at least one epsilon");
  if (!(cfg.t_end > 0.0)) throw ConfigError("growth fit window must be positive");
  const Grid& grid = w.grid();
  auto rng = corpus_rng(cfg.seed, 0);
  const Field g1 = random_bandlimited(grid, rng, {cfg.max_mode, 2.0, 1.0, true});
  const Field g2 = random_bandlimited(grid, rng, {cfg.max_mode, 2.0, 1.0, true});

  const double t_window = cfg.t_end;
  std::vector<GrowthFit> out;
  for (double eps : cfg.epsilons) {
    EvolutionParams prm;
    prm.kernel = kernel;
    prm.epsilon = eps;
    prm.power = cfg.p;
    prm.s = cfg.s;
    prm.nonlinear = false;
    const double eps_p = prm.eps_p();
    const double dt = cfg.dt > 0.0 ? cfg.dt : 0.25 * eps_p * WaveSystem(grid, prm).default_dt();
    LinearizedProblem problem{{w}, {Field::zeros(grid), Field::zeros(grid)}, {g1, g2}};
    const auto traj = solve_linearized(problem, prm, t_window * eps_p, dt);

    // Least squares of log E against t = tau / eps^p.
    double st = 0, se = 0, stt = 0, ste = 0;
    int count = 0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const double e = traj.energy[i];
      if (!(e > 0.0)) continue;
      const double t = traj.states[i].t / eps_p;
      const double y = std::log(e);
      st += t;
      se += y;
      stt += t * t;
      ste += t * y;
      ++count;
    }
    const double den = count * stt - st * st;
    const double slope = count > 1 && den > 0.0 ? (count * ste - st * se) / den : 0.0;
    out.push_back({eps, slope, t_window});
  }
  return out;
}

ConvergenceResult convergence_study(const State& initial, const ConvergenceConfig& cfg,
                                    const std::vector<double>& dt_list) {
  if (dt_list.size() < 4) throw ConfigError("convergence study needs at least 4 step sizes");
  for (std::size_t i = 0; i < dt_list.size(); ++i) {
    if (!(dt_list[i] > 0.0)) throw ConfigError("step sizes must be positive");
    if (i > 0 && std::abs(dt_list[i] - 0.5 * dt_list[i - 1]) > 1e-12 * dt_list[i - 1]) {
      std::ostringstream msg;
      msg << "step sizes must halve: entry " << i << " is " << dt_list[i] << " after "
          << dt_list[i - 1];
      throw ConfigError(msg.str());
    }
    const double steps = cfg.t_end / dt_list[i];
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
      throw ConfigError("every step size must divide t_end");
    }
  }
  const WaveSystem sys(initial.grid(), cfg.params);
  std::vector<State> finals;
  for (double dt : dt_list) {
    const auto steps = static_cast<long long>(std::llround(cfg.t_end / dt));
    finals.push_back(integrate(sys, initial, dt, steps, cfg.integrator));
  }
  auto distance = [](const State& a, const State& b) {
    double d = 0.0;
    for (auto [x, y] : {std::pair{&a.u, &b.u}, std::pair{&a.v, &b.v}}) {
      const auto xs = x->samples();
      const auto ys = y->samples();
      for (std::size_t j = 0; j < xs.size(); ++j) d = std::max(d, std::abs(xs[j] - ys[j]));
    }
    return d;
  };

  ConvergenceResult res;
  res.dts = dt_list;
  const State& finest = finals.back();
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) res.errors.push_back(distance(finals[i], finest));
  for (std::size_t i = 0; i + 2 < finals.size(); ++i) {
    const double d0 = distance(finals[i], finals[i + 1]);
    const double d1 = distance(finals[i + 1], finals[i + 2]);
    res.orders.push_back(d0 > 0.0 && d1 > 0.0 ? std::log2(d0 / d1) : 0.0);
  }
  res.observed_order = res.orders.front();
  if (!cfg.params.nonlinear) {
    const State exact = sys.linear_propagate(initial, cfg.t_end);
    for (const auto& f : finals) res.exact_errors.push_back(distance(f, exact));
  }
  return res;
}

}  // namespace nlwave
