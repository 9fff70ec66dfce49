#include "nlwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "nlwave/errors.hpp"
#include "nlwave/random_fields.hpp"

namespace nlwave {

EnergyReport energy_Es(const State& st, const Field& w, double epsilon, int p, double s) {
  const double eps_p = std::pow(epsilon, p);
  const double e2 = energy_squared(st.u, st.v, w, eps_p, s);
  if (e2 < 0.0) {
    std::ostringstream msg;
    msg << "E_s^2 = " << e2 << " < 0: epsilon = " << epsilon << " is too large for this w";
    throw HyperbolicityLost(msg.str(), e2);
  }
  EnergyReport rep;
  rep.s = s;
  rep.Es = std::sqrt(e2);
  const double nu = sobolev_norm(st.u, s);
  const double nv = sobolev_norm(st.v, s);
  rep.Xs_norm = std::hypot(nu, nv);
  rep.sum_norm = nu + nv;
  rep.epsilon_used = epsilon;
  rep.equivalence_ok = rep.sum_norm / (2.0 * std::numbers::sqrt2) <= rep.Es &&
                       rep.Es <= 0.5 * std::numbers::sqrt3 * rep.sum_norm;
  return rep;
}

HyperbolicityResult hyperbolicity_check(const Field& w, double epsilon, int p) {
  const double eps_p = std::pow(epsilon, p);
  double lo = std::numeric_limits<double>::infinity();
  for (double x : w.samples()) lo = std::min(lo, 1.0 + eps_p * x);
  return {lo, lo > 0.0};
}

AlgebraConstant calibrate_algebra_constant(const Grid& grid, double s, std::uint64_t seed,
                                           int samples) {
  const int cap = std::max(1, std::min(12, grid.size() / 4));
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    auto rng = corpus_rng(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> mode(1, cap);
    std::uniform_real_distribution<double> decay(0.5, 3.0);
    const Field f = random_bandlimited(grid, rng, {mode(rng), decay(rng), 1.0, true});
    const Field g = random_bandlimited(grid, rng, {mode(rng), decay(rng), 1.0, true});
    best = std::max(best, moser_probe(f, g, s, kS0));
  }
  return {best, seed, samples};
}

double epsilon0_estimate(const Field& w, double s, int p, double algebra_constant) {
  const double n = sobolev_norm(w, s);
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(1.0 / (2.0 * algebra_constant * n), 1.0 / p);
}

double epsilon0_estimate(const Field& w, double s, int p) {
  return epsilon0_estimate(w, s, p, calibrate_algebra_constant(w.grid(), s).value);
}

double hamiltonian(const State& st, double epsilon, int p) {
  return 0.5 * (l2_inner(st.u, st.u) + l2_inner(st.v, st.v)) +
         std::pow(epsilon, p) / (p + 2) * integral_of_power(st.u, p + 2);
}

double data_functional_I(double g_norm, std::span<const double> f_norms, double dt, double t) {
  if (t < 0.0) throw RangeError("data_functional_I: t must be nonnegative");
  if (t == 0.0) return g_norm;
  if (f_norms.size() < 2 || !(dt > 0.0)) throw RangeError("data_functional_I: empty forcing series");
  const double coverage = static_cast<double>(f_norms.size() - 1) * dt;
  if (t > coverage * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "data_functional_I: t = " << t << " beyond series coverage " << coverage;
    throw RangeError(msg.str());
  }
  std::vector<double> running(f_norms.size());
  double m = 0.0;
  for (std::size_t i = 0; i < f_norms.size(); ++i) running[i] = m = std::max(m, f_norms[i]);

  const double pos = std::min(t / dt, static_cast<double>(f_norms.size() - 1));
  const auto whole = static_cast<std::size_t>(pos);
  double acc = 0.0;
  for (std::size_t i = 0; i < whole; ++i) acc += 0.5 * dt * (running[i] + running[i + 1]);
  const double frac = pos - static_cast<double>(whole);
  if (frac > 0.0 && whole + 1 < running.size()) {
    const double end = running[whole] + frac * (running[whole + 1] - running[whole]);
    acc += 0.5 * frac * dt * (running[whole] + end);
  }
  return g_norm + acc;
}

double data_functional_I(const FieldPair& g, std::span<const FieldPair> f_series, double dt,
                         double s, double t) {
  std::vector<double> norms;
  norms.reserve(f_series.size());
  for (const auto& f : f_series) norms.push_back(xs_norm(f.first, f.second, s));
  return data_functional_I(xs_norm(g.first, g.second, s), norms, dt, t);
}

double moser_probe(const Field& f, const Field& g, double s, double s0) {
  const double den = sobolev_norm(f, s0) * sobolev_norm(g, s) + sobolev_norm(f, s) * sobolev_norm(g, s0);
  if (!(den > 0.0)) throw UndefinedRatio("moser_probe: both sides vanish (zero input)");
  return sobolev_norm(dealias_product(f, g), s) / den;
}

double kato_probe(const Field& f, const Field& u, double s, double s0, double r) {
  if (!(r > -s0 && r <= s0 + 1.0)) {
    throw ConfigError("kato_probe: r must satisfy -s0 < r <= s0 + 1");
  }
  const Field a = lambda_s(dealias_product(f, u), s);
  const Field b = dealias_product(f, lambda_s(u, s));
  double left = sobolev_norm(a - b, r);
  const double scale = sobolev_norm(a, r) + sobolev_norm(b, r);
  if (left <= 1e-12 * scale) left = 0.0;
  const Field fx = derivative(f);
  const double right = sobolev_norm(fx, s0) * sobolev_norm(u, s + r - 1.0) +
                       sobolev_norm(fx, s + r - 1.0) * sobolev_norm(u, s0);
  if (left == 0.0) return 0.0;
  if (!(right > 0.0)) {
    throw ContractError("kato_probe: commutator is nonzero while the right side vanishes");
  }
  return left / right;
}

FieldPair nonlinear_term(const Kernel& k, const FieldPair& u, int p) {
  const Grid& g = u.first.grid();
  return {Field::zeros(g), -apply_KDx(k, dealias_power(u.first, p + 1))};
}

FieldPair nonlinear_term_u(const Kernel& k, const FieldPair& u, const FieldPair& phi, int p) {
  std::vector<Field> factors(static_cast<std::size_t>(p), u.first);
  factors.push_back(phi.first);
  const Field prod = dealias_product(factors, p + 1);
  return {Field::zeros(u.first.grid()), double(-(p + 1)) * apply_KDx(k, prod)};
}

FieldPair nonlinear_term_uu(const Kernel& k, const FieldPair& u, const FieldPair& phi,
                            const FieldPair& psi, int p) {
  std::vector<Field> factors(static_cast<std::size_t>(p - 1), u.first);
  factors.push_back(phi.first);
  factors.push_back(psi.first);
  const Field prod = dealias_product(factors, p + 1);
  return {Field::zeros(u.first.grid()), double(-p * (p + 1)) * apply_KDx(k, prod)};
}

double nonlinear_estimate_probe(const Kernel& k, const FieldPair& u, const FieldPair& phi,
                                const FieldPair& psi, double s, double s0, int p,
                                NonlinearEstimate which) {
  auto X = [](const FieldPair& a, double order) { return xs_norm(a.first, a.second, order); };
  const double u0 = X(u, s0);
  const double u1 = X(u, s + 1.0);
  double left = 0.0;
  double right = 0.0;
  switch (which) {
    case NonlinearEstimate::N:
      left = X(nonlinear_term(k, u, p), s);
      right = std::pow(u0, p) * u1;
      break;
    case NonlinearEstimate::N_u:
      left = X(nonlinear_term_u(k, u, phi, p), s);
      right = (std::pow(u0, p) + std::pow(u0, p - 1)) * (X(phi, s + 1.0) + X(phi, s0) * u1);
      break;
    case NonlinearEstimate::N_uu:
      left = X(nonlinear_term_uu(k, u, phi, psi, p), s);
      right = (std::pow(u0, p - 1) + std::pow(u0, p - 2)) *
              (X(phi, s + 1.0) * X(psi, s0) + X(phi, s0) * X(psi, s + 1.0) +
               u1 * X(phi, s0) * X(psi, s0));
      break;
  }
  if (left == 0.0) return 0.0;
  if (!(right > 0.0) || !std::isfinite(right)) {
    throw UndefinedRatio("nonlinear_estimate_probe: degenerate right-hand side");
  }
  return left / right;
}

std::vector<std::string> probe_names() { return {"moser", "kato", "as-21", "as-22", "as-23"}; }

std::string hash_fields(std::span<const Field> fields) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& f : fields) {
    for (double x : f.samples()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct ProbeSample {
  double ratio = 0.0;
  std::vector<Field> inputs;
};

ProbeSample probe_sample(const std::string& probe, const ProbeSuiteConfig& cfg, const Grid& grid,
                         const Kernel& kernel, int index) {
  auto rng = corpus_rng(cfg.seed, static_cast<std::uint64_t>(index));
  std::uniform_int_distribution<int> mode(1, cfg.max_mode);
  std::uniform_real_distribution<double> decay(0.5, 2.5);
  std::uniform_real_distribution<double> amp(0.2, 2.0);
  auto draw = [&] {
    const BandLimitedSpec spec{mode(rng), decay(rng), amp(rng), true};
    return random_bandlimited(grid, rng, spec);
  };
  ProbeSample out;
  if (probe == "moser") {
    Field f = draw();
    Field g = draw();
    out.ratio = moser_probe(f, g, cfg.s, cfg.s0);
    out.inputs = {std::move(f), std::move(g)};
  } else if (probe == "kato") {
    Field f = draw();
    Field u = draw();
    out.ratio = kato_probe(f, u, cfg.s, cfg.s0, cfg.r);
    out.inputs = {std::move(f), std::move(u)};
  } else {
    FieldPair u{draw(), draw()};
    FieldPair phi{draw(), draw()};
    FieldPair psi{draw(), draw()};
    const auto which = probe == "as-21"   ? NonlinearEstimate::N
                       : probe == "as-22" ? NonlinearEstimate::N_u
                                          : NonlinearEstimate::N_uu;
    out.ratio = nonlinear_estimate_probe(kernel, u, phi, psi, cfg.s, cfg.s0, cfg.p, which);
    out.inputs = {u.first, u.second, phi.first, phi.second, psi.first, psi.second};
  }
  return out;
}

}  // namespace

ProbeReport run_probe_suite(const std::string& probe, const ProbeSuiteConfig& cfg) {
  const auto names = probe_names();
  if (std::find(names.begin(), names.end(), probe) == names.end()) {
    throw ConfigError("unknown probe '" + probe + "'");
  }
  if (cfg.samples < 1) throw ConfigError("probe suite needs at least one sample");
  const Grid grid(cfg.half_length, cfg.n_points);
  if (cfg.max_mode < 1 || cfg.max_mode >= cfg.n_points / 2) {
    throw ConfigError("probe max_mode must lie in [1, N/2)");
  }
  const Kernel kernel = builtin_kernel("dirac");

  std::vector<double> ratios(static_cast<std::size_t>(cfg.samples), 0.0);
  const int workers = std::max(1, std::min(cfg.workers, cfg.samples));
  auto work = [&](int w) {
    for (int i = w; i < cfg.samples; i += workers) {
      ratios[static_cast<std::size_t>(i)] = probe_sample(probe, cfg, grid, kernel, i).ratio;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  ProbeReport rep;
  rep.probe = probe;
  rep.samples = cfg.samples;
  rep.seed = cfg.seed;
  for (int i = 0; i < cfg.samples; ++i) {
    const double r = ratios[static_cast<std::size_t>(i)];
    if (!std::isfinite(r)) rep.all_finite = false;
    if (rep.max_ratio_index < 0 || r > rep.empirical_C) {
      rep.empirical_C = r;
      rep.max_ratio_index = i;
    }
  }
  const auto best = probe_sample(probe, cfg, grid, kernel, rep.max_ratio_index);
  rep.max_ratio_input_hash = hash_fields(best.inputs);
  return rep;
}

NashMoserParams nash_moser_params(double D) {
  NashMoserParams nm;
  nm.D = D;
  nm.delta = std::max(nm.d1, nm.d1_prime + nm.m);
  nm.q = D - nm.m - nm.d1_prime;
  if (!(nm.q > 0.0) || !(D > nm.delta)) {
    std::ostringstream msg;
    msg << "nash_moser_params: D must exceed " << nm.delta << ", got " << D;
    throw DomainError(msg.str());
  }
  // (sqrt(delta) + sqrt(2(delta+q)))^2 expanded so that perfect squares stay exact.
  const double a = nm.delta;
  const double b = 2.0 * (nm.delta + nm.q);
  const double square = a + b + 2.0 * std::sqrt(a * b);
  nm.P_min = nm.delta + D / nm.q * square;
  return nm;
}

PminOptimum optimize_pmin(double tolerance) {
  const double lo0 = 3.0 + 1e-9;
  const double hi0 = 100.0;
  auto P = [](double D) { return nash_moser_params(D).P_min; };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo0;
  double b = hi0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = P(c);
  double fd = P(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = P(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = P(d);
    }
  }
  PminOptimum opt;
  opt.D_star = 0.5 * (a + b);
  opt.P_star = P(opt.D_star);
  opt.bracket_lo = lo0;
  opt.bracket_hi = hi0;
  return opt;
}

}  // namespace nlwave
