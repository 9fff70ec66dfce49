#pragma once

// Periodic grid, real fields with a consistent discrete spectrum, Fourier
// multipliers and the Sobolev-scale operators built on them.
//
// Conventions on the box [-L, L) with N nodes x_j = -L + 2Lj/N:
//   xi_k = pi k / L,  k in {-N/2, ..., N/2 - 1}
//   c_k  = (1/N) sum_j u_j exp(-i xi_k x_j)
//   |f|_{H^s}^2 = 2L sum_k (1 + xi_k^2)^s |c_k|^2
// so that s = 0 is the L2 norm on the box and Parseval is exact.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace nlwave {

using Complex = std::complex<double>;

class Grid {
 public:
  /// Throws ConfigError unless L > 0 and N is even and >= 8.
  Grid(double half_length, int n_points);

  double half_length() const noexcept { return half_length_; }
  double period() const noexcept { return 2.0 * half_length_; }
  int size() const noexcept { return n_; }
  /// Number of stored non-negative modes, k = 0..N/2 (the last one is the Nyquist mode -N/2).
  int half_size() const noexcept { return n_ / 2 + 1; }
  double spacing() const noexcept { return 2.0 * half_length_ / n_; }

  double node(int j) const noexcept { return -half_length_ + spacing() * j; }
  std::vector<double> nodes() const;

  /// xi_k for a signed index k in [-N/2, N/2).
  double wavenumber(int k) const noexcept;
  /// Signed wavenumber list in ascending index order -N/2..N/2-1.
  std::vector<double> wavenumbers() const;
  /// |xi_{-N/2}|, the largest resolved |xi|.
  double max_wavenumber() const noexcept;

  /// Wavenumber attached to slot m of the half spectrum (slot N/2 is -N/2).
  double half_wavenumber(int m) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double half_length_;
  int n_;
};

Grid make_grid(double half_length, int n_points);

/// A real scalar field stored both as samples and as its half spectrum
/// c_0..c_{N/2-1}, c_{-N/2}. Immutable once constructed.
class Field {
 public:
  static Field from_samples(const Grid& grid, std::vector<double> samples);
  /// Takes c_0..c_{N/2-1} followed by c_{-N/2}; imaginary parts of the
  /// self-conjugate slots are discarded.
  static Field from_half_spectrum(const Grid& grid, std::vector<Complex> half);
  static Field zeros(const Grid& grid);
  static Field constant(const Grid& grid, double value);

  template <class F>
  static Field from_function(const Grid& grid, F&& f) {
    std::vector<double> s(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) s[static_cast<std::size_t>(j)] = f(grid.node(j));
    return from_samples(grid, std::move(s));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const Complex> half_spectrum() const noexcept { return half_; }

  /// c_k for signed k in [-N/2, N/2).
  Complex coefficient(int k) const;
  /// All N coefficients ordered k = -N/2 .. N/2-1.
  std::vector<Complex> spectrum() const;

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  Field operator-() const;
  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);
  friend Field operator*(double alpha, const Field& a);
  friend Field axpy(double alpha, const Field& b, const Field& a);

 private:
  Field(Grid grid, std::vector<double> samples, std::vector<Complex> half)
      : grid_(grid), samples_(std::move(samples)), half_(std::move(half)) {}

  Grid grid_;
  std::vector<double> samples_;
  std::vector<Complex> half_;
};

/// a + alpha * b, computed in both representations without a transform.
Field axpy(double alpha, const Field& b, const Field& a);

enum class Parity {
  EvenReal,       ///< m(-xi) = m(xi), real valued
  OddImaginary,   ///< m(-xi) = -m(xi), purely imaginary; Nyquist mode is zeroed
  General,        ///< Hermitian, m(-xi) = conj(m(xi))
};

struct Multiplier {
  std::function<Complex(double)> symbol;
  Parity parity = Parity::EvenReal;
};

/// A multiplier evaluated once on the half spectrum of a fixed grid.
class SampledMultiplier {
 public:
  /// Spot-checks the parity tag at +-xi_1 and throws ContractError on mismatch.
  static SampledMultiplier sample(const Multiplier& m, const Grid& grid);
  /// Wraps precomputed half-spectrum values; slot N/2 must already respect realness.
  static SampledMultiplier from_values(const Grid& grid, std::vector<Complex> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }

  Field apply(const Field& f) const;
  /// Applies in place to a half spectrum of matching length.
  void apply_in_place(std::span<Complex> half) const;

 private:
  SampledMultiplier(Grid grid, std::vector<Complex> values)
      : grid_(grid), values_(std::move(values)) {}

  Grid grid_;
  std::vector<Complex> values_;
};

Field apply_multiplier(const Field& f, const Multiplier& m);

/// Discrete L2 inner product on the box, 2L sum_k conj(c_k(f)) c_k(g) (real part).
double l2_inner(const Field& f, const Field& g);
/// <f, g>_{H^s} = <Lambda^s f, Lambda^s g>_{L2}.
double sobolev_inner(const Field& f, const Field& g, double s);
double sobolev_norm(const Field& f, double s);

/// Lambda^s = (1 - D_x^2)^{s/2}, multiplier (1 + xi^2)^{s/2}.
Field lambda_s(const Field& f, double s);
/// Spectral derivative, multiplier i xi.
Field derivative(const Field& f);
/// S_theta: keeps the modes with |xi| <= theta.
Field smooth_cutoff(const Field& f, double theta);

/// Fourier transform of the unit-mass bump eta(x) = c exp(-1/(1-x^2)).
double bump_transform(double omega);
/// First absolute moment of the bump, int |x| eta(x) dx.
double bump_abs_moment();
/// Friedrichs mollifier J^h, multiplier eta_hat(h xi). Throws ConfigError for h <= 0.
Field mollify(const Field& f, double h);

/// Smallest 2-3-5 smooth even size able to hold an alias-free product of q
/// factors of an N-point field.
int padded_size(int n_points, int factors);
/// Pointwise product of band-limited fields evaluated on a zero-padded grid
/// and truncated back to N modes. Requires total_power == factors.size().
Field dealias_product(std::span<const Field> factors, int total_power);
Field dealias_product(const Field& a, const Field& b);
/// f^q with the same padding rule.
Field dealias_power(const Field& f, int q);
/// Exact integral over the box of f^q (trapezoid on the padded grid).
double integral_of_power(const Field& f, int q);
/// Trapezoid integral of the samples, equal to 2L c_0.
double integral(const Field& f);

/// Spectral interpolation onto a finer grid with the same box (n_fine >= N).
Field resample(const Field& f, int n_fine);

}  // namespace nlwave
