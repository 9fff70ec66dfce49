#include "nlwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlwave/errors.hpp"

namespace nlwave {

Kernel::Kernel(std::string name, std::function<double(double)> beta_hat,
               std::optional<double> declared_r, bool elliptic, double c_bound)
    : name_(std::move(name)),
      beta_hat_(std::move(beta_hat)),
      declared_r_(declared_r),
      elliptic_(elliptic),
      c_bound_(c_bound) {
  if (!beta_hat_) throw ConfigError("kernel '" + name_ + "' has no symbol");
  if (!(c_bound_ > 0.0)) throw ConfigError("kernel '" + name_ + "' needs a positive bound C");
}

double Kernel::root_symbol(double xi) const { return std::sqrt(std::max(0.0, beta_hat_(xi))); }

namespace {

double triangular_symbol(double xi) {
  const double y = 0.5 * xi;
  if (std::abs(y) < 1e-4) {
    const double sinc = 1.0 - y * y / 6.0;
    return sinc * sinc;
  }
  const double sinc = std::sin(y) / y;
  return sinc * sinc;
}

}  // namespace

std::vector<std::string> builtin_kernel_names() { return {"dirac", "exponential", "triangular"}; }

Kernel builtin_kernel(const std::string& name) {
  if (name == "dirac") {
    return Kernel("dirac", [](double) { return 1.0; }, 0.0, true, 1.0);
  }
  if (name == "exponential") {
    return Kernel("exponential", [](double xi) { return 1.0 / (1.0 + xi * xi); }, 2.0, true, 1.0);
  }
  if (name == "triangular") {
    return Kernel("triangular", triangular_symbol, 2.0, false, 1.0);
  }
  std::string valid;
  for (const auto& n : builtin_kernel_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown kernel '" + name + "' (valid: " + valid + ")");
}

Kernel tabulated_kernel(std::string name, std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw ConfigError("kernel table '" + name + "' is empty");
  double prev = -1.0;
  double cmax = 0.0;
  double cmin = std::numeric_limits<double>::infinity();
  for (const auto& [xi, b] : table) {
    if (!std::isfinite(xi) || !std::isfinite(b)) throw ConfigError("kernel table has non-finite entries");
    if (xi < 0.0) throw ConfigError("kernel table xi must be >= 0");
    if (!(xi > prev)) throw ConfigError("kernel table xi must be strictly increasing");
    if (b < 0.0) throw ConfigError("kernel table beta_hat must be nonnegative");
    prev = xi;
    cmax = std::max(cmax, b);
    cmin = std::min(cmin, b);
  }
  auto symbol = [t = std::move(table)](double xi) {
    const double a = std::abs(xi);
    if (a <= t.front().first) return t.front().second;
    if (a >= t.back().first) return t.back().second;
    auto hi = std::upper_bound(t.begin(), t.end(), a,
                               [](double v, const auto& row) { return v < row.first; });
    auto lo = hi - 1;
    const double w = (a - lo->first) / (hi->first - lo->first);
    return (1.0 - w) * lo->second + w * hi->second;
  };
  return Kernel(std::move(name), std::move(symbol), std::nullopt,
                cmin >= kEllipticityThreshold, cmax > 0.0 ? cmax : 1.0);
}

ValidationReport validate_kernel(const Kernel& k, const Grid& grid) {
  ValidationReport rep;
  rep.c1 = std::numeric_limits<double>::infinity();
  rep.c_estimate = 0.0;
  const int n = grid.size();
  for (int idx = -n / 2; idx < n / 2; ++idx) {
    const double xi = grid.wavenumber(idx);
    const double b = k.beta_hat(xi);
    if (!(b >= 0.0)) {
      std::ostringstream msg;
      msg << "kernel '" << k.name() << "' rejected: beta_hat(" << xi << ") = " << b
          << " violates 0 <= beta_hat";
      throw ConfigError(msg.str());
    }
    if (b > k.c_bound() * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "kernel '" << k.name() << "' rejected: beta_hat(" << xi << ") = " << b
          << " exceeds its bound C = " << k.c_bound();
      throw ConfigError(msg.str());
    }
    if (std::abs(b - k.beta_hat(-xi)) > 1e-12 * std::max(1.0, b)) {
      throw ConfigError("kernel '" + k.name() + "' rejected: beta_hat is not even");
    }
    rep.c_estimate = std::max(rep.c_estimate, b);
    if (b < rep.c1) {
      rep.c1 = b;
      rep.argmin_xi = xi;
    }
  }
  rep.elliptic = rep.c1 >= kEllipticityThreshold;

  // Upper envelope sup_{zeta >= xi} beta_hat(zeta) over the top octave, then a
  // least-squares fit of log(envelope) against log(1 + xi^2).
  std::vector<double> xs;
  std::vector<double> env;
  const double xi_max = grid.max_wavenumber();
  for (int idx = 1; idx <= n / 2; ++idx) {
    const double xi = grid.wavenumber(idx);
    if (xi >= 0.5 * xi_max) {
      xs.push_back(xi);
      env.push_back(k.beta_hat(xi));
    }
  }
  for (std::size_t i = env.size(); i-- > 1;) env[i - 1] = std::max(env[i - 1], env[i]);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(env[i] > 0.0)) continue;
    const double lx = std::log1p(xs[i] * xs[i]);
    const double ly = std::log(env[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  if (count >= 2 && denom > 0.0) {
    const double slope = (count * sxy - sx * sy) / denom;
    rep.fitted_r = -2.0 * slope + 0.0;
  } else {
    rep.fitted_r = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

SampledMultiplier k_multiplier(const Kernel& k, const Grid& grid) {
  return SampledMultiplier::sample(
      {[&k](double xi) { return Complex{k.root_symbol(xi), 0.0}; }, Parity::EvenReal}, grid);
}

SampledMultiplier kdx_multiplier(const Kernel& k, const Grid& grid) {
  return SampledMultiplier::sample(
      {[&k](double xi) { return Complex{0.0, xi * k.root_symbol(xi)}; }, Parity::OddImaginary},
      grid);
}

Field apply_K(const Kernel& k, const Field& f) { return k_multiplier(k, f.grid()).apply(f); }

Field apply_KDx(const Kernel& k, const Field& f) { return kdx_multiplier(k, f.grid()).apply(f); }

Field apply_K_inverse(const Kernel& k, const Field& f) {
  const Grid& grid = f.grid();
  for (int idx = 0; idx <= grid.size() / 2; ++idx) {
    const double xi = grid.wavenumber(idx == grid.size() / 2 ? -idx : idx);
    const double b = k.beta_hat(xi);
    if (b <= kEllipticityThreshold) {
      std::ostringstream msg;
      msg << "kernel '" << k.name() << "' is not elliptic on this grid: beta_hat(" << xi
          << ") = " << b << " <= " << kEllipticityThreshold << "; K cannot be inverted";
      throw NonElliptic(msg.str(), xi, b);
    }
  }
  return apply_multiplier(
      f, {[&k](double xi) { return Complex{1.0 / k.root_symbol(xi), 0.0}; }, Parity::EvenReal});
}

Field apply_beta(const Kernel& k, const Field& f) {
  return apply_multiplier(f, {[&k](double xi) { return Complex{k.beta_hat(xi), 0.0}; },
                              Parity::EvenReal});
}

Field apply_beta_dxx(const Kernel& k, const Field& f) {
  return apply_multiplier(
      f, {[&k](double xi) { return Complex{-xi * xi * k.beta_hat(xi), 0.0}; }, Parity::EvenReal});
}

}  // namespace nlwave
