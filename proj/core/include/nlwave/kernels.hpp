#pragma once

// Convolution kernels beta given by their Fourier symbol beta_hat, and the
// operators K = F^{-1} sqrt(beta_hat) F, K D_x and K^{-1} built from them.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlwave/spectral.hpp"

namespace nlwave {

/// beta_hat below this value on the resolved band counts as a loss of ellipticity.
inline constexpr double kEllipticityThreshold = 1e-8;

class Kernel {
 public:
  Kernel(std::string name, std::function<double(double)> beta_hat, std::optional<double> declared_r,
         bool elliptic, double c_bound);

  const std::string& name() const noexcept { return name_; }
  double beta_hat(double xi) const { return beta_hat_(xi); }
  /// sqrt(beta_hat), the symbol of K.
  double root_symbol(double xi) const;
  const std::optional<double>& declared_r() const noexcept { return declared_r_; }
  bool elliptic() const noexcept { return elliptic_; }
  double c_bound() const noexcept { return c_bound_; }

 private:
  std::string name_;
  std::function<double(double)> beta_hat_;
  std::optional<double> declared_r_;
  bool elliptic_;
  double c_bound_;
};

/// One of "dirac", "exponential", "triangular"; ConfigError otherwise.
Kernel builtin_kernel(const std::string& name);
/// Names accepted by builtin_kernel.
std::vector<std::string> builtin_kernel_names();

/// Symbol given as (xi, beta_hat) rows with strictly increasing xi >= 0,
/// linearly interpolated, evenly extended and held constant past the ends.
Kernel tabulated_kernel(std::string name, std::vector<std::pair<double, double>> table);

struct ValidationReport {
  double c_estimate = 0.0;     ///< max beta_hat over grid wavenumbers
  double c1 = 0.0;             ///< min beta_hat over grid wavenumbers
  double argmin_xi = 0.0;      ///< where the minimum is attained
  bool elliptic = false;       ///< c1 >= kEllipticityThreshold
  double fitted_r = 0.0;       ///< decay exponent of the upper envelope over the top octave
};

/// Checks nonnegativity, evenness and the bound on the grid's wavenumbers.
/// Throws ConfigError when beta_hat is negative, exceeds c_bound or is not even.
ValidationReport validate_kernel(const Kernel& k, const Grid& grid);

SampledMultiplier k_multiplier(const Kernel& k, const Grid& grid);
SampledMultiplier kdx_multiplier(const Kernel& k, const Grid& grid);

Field apply_K(const Kernel& k, const Field& f);
Field apply_KDx(const Kernel& k, const Field& f);
/// Throws NonElliptic naming the first wavenumber where beta_hat <= threshold.
Field apply_K_inverse(const Kernel& k, const Field& f);
/// Convolution with beta itself, K^2.
Field apply_beta(const Kernel& k, const Field& f);
/// beta * D_x^2 as a single even multiplier -xi^2 beta_hat (Nyquist kept).
Field apply_beta_dxx(const Kernel& k, const Field& f);

}  // namespace nlwave
