#pragma once

// Shared test helpers: a small seeded generator for property tests and
// independent oracles that do not go through the library's FFT path.

#include <concepts>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "nlwave/spectral.hpp"

namespace nlwave::testkit {

/// SplitMix64 with a few distributions. Deterministic across platforms.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Real trigonometric polynomial with modes |k| <= max_mode, built from samples.
  Field field(const Grid& g, int max_mode, double decay = 1.0) {
    std::vector<double> a(static_cast<std::size_t>(max_mode + 1));
    std::vector<double> b(a.size());
    for (int k = 0; k <= max_mode; ++k) {
      const double damp = std::pow(1.0 + k * k, -0.5 * decay);
      a[static_cast<std::size_t>(k)] = normal() * damp;
      b[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : normal() * damp;
    }
    const double w = std::numbers::pi / g.half_length();
    return Field::from_function(g, [&](double x) {
      double s = 0.0;
      for (int k = 0; k <= max_mode; ++k) {
        s += a[static_cast<std::size_t>(k)] * std::cos(k * w * x) + b[static_cast<std::size_t>(k)] * std::sin(k * w * x);
      }
      return s;
    });
  }

 private:
  std::uint64_t state_;
};

/// c_k = (1/N) sum_j u_j exp(-i xi_k x_j) by direct summation, k = -N/2..N/2-1.
inline std::vector<std::complex<double>> naive_dft(const Grid& g, const std::vector<double>& u) {
  const int n = g.size();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n));
  for (int k = -n / 2; k < n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += u[static_cast<std::size_t>(j)] * std::polar(1.0, -g.wavenumber(k) * g.node(j));
    }
    c[static_cast<std::size_t>(k + n / 2)] = acc / static_cast<double>(n);
  }
  return c;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.samples().size(); ++j) d = std::max(d, std::abs(a.samples()[j] - b.samples()[j]));
  return d;
}

template <class F>
  requires std::invocable<F, double>
double max_abs_diff(const Field& a, F&& f) {
  double d = 0.0;
  for (int j = 0; j < a.grid().size(); ++j) {
    d = std::max(d, std::abs(a.samples()[static_cast<std::size_t>(j)] - f(a.grid().node(j))));
  }
  return d;
}

/// Trapezoid rule of f^2 over the box, from samples only.
inline double quadrature_sq(const Field& f) {
  double s = 0.0;
  for (double x : f.samples()) s += x * x;
  return s * f.grid().spacing();
}

}  // namespace nlwave::testkit
