#include "nlwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "nlwave/errors.hpp"

namespace nlwave {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(double half_length, int n_points) : half_length_(half_length), n_(n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ConfigError("L must be positive, got " + std::to_string(half_length));
  }
  if (n_points % 2 != 0) throw ConfigError("N must be even, got " + std::to_string(n_points));
  if (n_points < 8) throw ConfigError("N must be at least 8, got " + std::to_string(n_points));
}

Grid make_grid(double half_length, int n_points) { return Grid(half_length, n_points); }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

double Grid::wavenumber(int k) const noexcept { return pi * k / half_length_; }

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> xi(static_cast<std::size_t>(n_));
  for (int k = -n_ / 2; k < n_ / 2; ++k) xi[static_cast<std::size_t>(k + n_ / 2)] = wavenumber(k);
  return xi;
}

double Grid::max_wavenumber() const noexcept { return pi * (n_ / 2) / half_length_; }

double Grid::half_wavenumber(int m) const noexcept {
  return m == n_ / 2 ? wavenumber(-n_ / 2) : wavenumber(m);
}

// ---------------------------------------------------------------------------
// Field

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (!(a == b)) throw ContractError(std::string(op) + ": fields live on different grids");
}

// Multiplicity of half-spectrum slot m in the full spectrum.
inline double slot_weight(int m, int n) { return (m == 0 || m == n / 2) ? 1.0 : 2.0; }

}  // namespace

Field Field::from_samples(const Grid& grid, std::vector<double> samples) {
  if (static_cast<int>(samples.size()) != grid.size()) {
    throw ContractError("from_samples: expected " + std::to_string(grid.size()) + " samples, got " +
                        std::to_string(samples.size()));
  }
  std::vector<Complex> half(static_cast<std::size_t>(grid.half_size()));
  detail::forward_real(samples, half);
  return Field(grid, std::move(samples), std::move(half));
}

Field Field::from_half_spectrum(const Grid& grid, std::vector<Complex> half) {
  if (static_cast<int>(half.size()) != grid.half_size()) {
    throw ContractError("from_half_spectrum: expected " + std::to_string(grid.half_size()) +
                        " coefficients, got " + std::to_string(half.size()));
  }
  half.front().imag(0.0);
  half.back().imag(0.0);
  std::vector<double> samples(static_cast<std::size_t>(grid.size()));
  detail::inverse_real(half, samples);
  return Field(grid, std::move(samples), std::move(half));
}

Field Field::zeros(const Grid& grid) {
  return Field(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0),
               std::vector<Complex>(static_cast<std::size_t>(grid.half_size())));
}

Field Field::constant(const Grid& grid, double value) {
  std::vector<Complex> half(static_cast<std::size_t>(grid.half_size()));
  half[0] = value;
  return Field(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value),
               std::move(half));
}

Complex Field::coefficient(int k) const {
  const int n = grid_.size();
  if (k < -n / 2 || k >= n / 2) throw ContractError("coefficient index out of range");
  if (k == -n / 2) return half_.back();
  return k >= 0 ? half_[static_cast<std::size_t>(k)] : std::conj(half_[static_cast<std::size_t>(-k)]);
}

std::vector<Complex> Field::spectrum() const {
  const int n = grid_.size();
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int k = -n / 2; k < n / 2; ++k) out[static_cast<std::size_t>(k + n / 2)] = coefficient(k);
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double x) { return std::isfinite(x); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double x : samples_) m = std::max(m, std::abs(x));
  return m;
}

Field Field::operator-() const { return -1.0 * *this; }

Field axpy(double alpha, const Field& b, const Field& a) {
  require_same_grid(a.grid(), b.grid(), "axpy");
  std::vector<double> s(a.samples().begin(), a.samples().end());
  std::vector<Complex> h(a.half_spectrum().begin(), a.half_spectrum().end());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] += alpha * b.samples()[j];
  for (std::size_t m = 0; m < h.size(); ++m) h[m] += alpha * b.half_spectrum()[m];
  return Field(a.grid_, std::move(s), std::move(h));
}

Field operator+(const Field& a, const Field& b) { return axpy(1.0, b, a); }
Field operator-(const Field& a, const Field& b) { return axpy(-1.0, b, a); }

Field operator*(double alpha, const Field& a) {
  std::vector<double> s(a.samples_);
  std::vector<Complex> h(a.half_);
  for (auto& x : s) x *= alpha;
  for (auto& c : h) c *= alpha;
  return Field(a.grid_, std::move(s), std::move(h));
}

// ---------------------------------------------------------------------------
// Multipliers

SampledMultiplier SampledMultiplier::sample(const Multiplier& m, const Grid& grid) {
  const double xi1 = grid.wavenumber(1);
  const Complex a = m.symbol(xi1);
  const Complex b = m.symbol(-xi1);
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  bool ok = true;
  switch (m.parity) {
    case Parity::EvenReal:
      ok = std::abs(a.imag()) <= tol && std::abs(a - b) <= tol;
      break;
    case Parity::OddImaginary:
      ok = std::abs(a.real()) <= tol && std::abs(a + b) <= tol;
      break;
    case Parity::General:
      ok = std::abs(b - std::conj(a)) <= tol;
      break;
  }
  if (!ok) throw ContractError("multiplier parity tag does not match its symbol at +-xi_1");

  const int n = grid.size();
  std::vector<Complex> values(static_cast<std::size_t>(grid.half_size()));
  for (int k = 0; k < n / 2; ++k) values[static_cast<std::size_t>(k)] = m.symbol(grid.wavenumber(k));
  values.back() = m.parity == Parity::OddImaginary
                      ? Complex{}
                      : Complex{m.symbol(grid.wavenumber(-n / 2)).real(), 0.0};
  return SampledMultiplier(grid, std::move(values));
}

SampledMultiplier SampledMultiplier::from_values(const Grid& grid, std::vector<Complex> values) {
  if (static_cast<int>(values.size()) != grid.half_size()) {
    throw ContractError("from_values: multiplier table has the wrong length");
  }
  return SampledMultiplier(grid, std::move(values));
}

void SampledMultiplier::apply_in_place(std::span<Complex> half) const {
  for (std::size_t m = 0; m < half.size(); ++m) half[m] *= values_[m];
}

Field SampledMultiplier::apply(const Field& f) const {
  require_same_grid(f.grid(), grid_, "apply_multiplier");
  std::vector<Complex> half(f.half_spectrum().begin(), f.half_spectrum().end());
  apply_in_place(half);
  return Field::from_half_spectrum(grid_, std::move(half));
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  return SampledMultiplier::sample(m, f.grid()).apply(f);
}

// ---------------------------------------------------------------------------
// Norms and Sobolev-scale operators

double l2_inner(const Field& f, const Field& g) { return sobolev_inner(f, g, 0.0); }

double sobolev_inner(const Field& f, const Field& g, double s) {
  require_same_grid(f.grid(), g.grid(), "sobolev_inner");
  const Grid& grid = f.grid();
  const auto cf = f.half_spectrum();
  const auto cg = g.half_spectrum();
  double acc = 0.0;
  for (int m = 0; m < grid.half_size(); ++m) {
    const double xi = grid.half_wavenumber(m);
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + xi * xi, s);
    const auto i = static_cast<std::size_t>(m);
    acc += slot_weight(m, grid.size()) * w * (std::conj(cf[i]) * cg[i]).real();
  }
  return grid.period() * acc;
}

double sobolev_norm(const Field& f, double s) {
  const Grid& grid = f.grid();
  const auto c = f.half_spectrum();
  double acc = 0.0;
  for (int m = 0; m < grid.half_size(); ++m) {
    const double xi = grid.half_wavenumber(m);
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + xi * xi, s);
    acc += slot_weight(m, grid.size()) * w * std::norm(c[static_cast<std::size_t>(m)]);
  }
  return std::sqrt(grid.period() * acc);
}

Field lambda_s(const Field& f, double s) {
  if (s == 0.0) return f;
  return apply_multiplier(
      f, {[s](double xi) { return Complex{std::pow(1.0 + xi * xi, 0.5 * s), 0.0}; },
          Parity::EvenReal});
}

Field derivative(const Field& f) {
  return apply_multiplier(f, {[](double xi) { return Complex{0.0, xi}; }, Parity::OddImaginary});
}

Field smooth_cutoff(const Field& f, double theta) {
  if (theta < 0.0) throw ConfigError("smooth_cutoff: theta must be nonnegative");
  return apply_multiplier(
      f, {[theta](double xi) { return Complex{std::abs(xi) <= theta ? 1.0 : 0.0, 0.0}; },
          Parity::EvenReal});
}

// ---------------------------------------------------------------------------
// Mollifier

namespace {

struct BumpTable {
  static constexpr int kIntervals = 8192;  // on [0, 1]
  std::vector<double> x;
  std::vector<double> w;  // trapezoid weight * eta(x), already normalized for int over R

  BumpTable() {
    const double h = 1.0 / kIntervals;
    x.resize(kIntervals + 1);
    w.resize(kIntervals + 1);
    double mass = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double xi = i * h;
      const double e = xi < 1.0 ? std::exp(-1.0 / (1.0 - xi * xi)) : 0.0;
      // Symmetric extension: the origin counts once, every other node twice.
      const double weight = (i == 0 ? 1.0 : 2.0) * h * e;
      x[static_cast<std::size_t>(i)] = xi;
      w[static_cast<std::size_t>(i)] = weight;
      mass += weight;
    }
    for (auto& v : w) v /= mass;
  }
};

const BumpTable& bump() {
  static const BumpTable table;
  return table;
}

}  // namespace

double bump_transform(double omega) {
  const auto& t = bump();
  if (omega == 0.0) return 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) acc += t.w[i] * std::cos(omega * t.x[i]);
  return acc;
}

double bump_abs_moment() {
  const auto& t = bump();
  double acc = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) acc += t.w[i] * t.x[i];
  return acc;
}

Field mollify(const Field& f, double h) {
  if (!(h > 0.0)) throw ConfigError("mollify: h must be positive");
  return apply_multiplier(f, {[h](double xi) { return Complex{bump_transform(h * xi), 0.0}; },
                              Parity::EvenReal});
}

// ---------------------------------------------------------------------------
// Dealiased products

namespace {

bool is_smooth_235(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

// Copies an N-grid half spectrum into an M-grid one, splitting the Nyquist
// coefficient evenly between +-N/2.
std::vector<Complex> pad_half(std::span<const Complex> half, int n, int m) {
  std::vector<Complex> out(static_cast<std::size_t>(m / 2 + 1));
  if (m == n) {
    std::copy(half.begin(), half.end(), out.begin());
    return out;
  }
  std::copy(half.begin(), half.end() - 1, out.begin());
  out[static_cast<std::size_t>(n / 2)] = 0.5 * half.back();
  return out;
}

// Inverse of pad_half for the product: folds +-N/2 back onto the Nyquist slot.
std::vector<Complex> truncate_half(std::span<const Complex> padded, int n, int m) {
  std::vector<Complex> out(static_cast<std::size_t>(n / 2 + 1));
  if (m == n) {
    std::copy(padded.begin(), padded.end(), out.begin());
    return out;
  }
  std::copy(padded.begin(), padded.begin() + n / 2, out.begin());
  out.back() = 2.0 * padded[static_cast<std::size_t>(n / 2)].real();
  return out;
}

std::vector<double> padded_samples(const Field& f, int m) {
  const int n = f.grid().size();
  std::vector<double> s(static_cast<std::size_t>(m));
  if (m == n) {
    std::copy(f.samples().begin(), f.samples().end(), s.begin());
    return s;
  }
  const auto half = pad_half(f.half_spectrum(), n, m);
  detail::inverse_real(half, s);
  return s;
}

Field truncate_to(const Grid& grid, std::span<const double> padded) {
  const int m = static_cast<int>(padded.size());
  std::vector<Complex> half(static_cast<std::size_t>(m / 2 + 1));
  detail::forward_real(padded, half);
  return Field::from_half_spectrum(grid, truncate_half(half, grid.size(), m));
}

}  // namespace

int padded_size(int n_points, int factors) {
  if (factors <= 1) return n_points;
  int m = (factors + 1) * n_points / 2;
  if (m % 2 != 0) ++m;
  while (!is_smooth_235(m)) m += 2;
  return m;
}

Field dealias_product(std::span<const Field> factors, int total_power) {
  if (factors.empty()) throw ContractError("dealias_product: no factors");
  if (static_cast<int>(factors.size()) != total_power) {
    throw ContractError("dealias_product: total_power must equal the number of factors");
  }
  const Grid& grid = factors.front().grid();
  for (const auto& f : factors) require_same_grid(grid, f.grid(), "dealias_product");
  if (total_power == 1) return factors.front();

  const int m = padded_size(grid.size(), total_power);
  std::vector<double> acc = padded_samples(factors.front(), m);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const auto s = padded_samples(factors[i], m);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= s[j];
  }
  return truncate_to(grid, acc);
}

Field dealias_product(const Field& a, const Field& b) {
  const Field pair[] = {a, b};
  return dealias_product(pair, 2);
}

Field dealias_power(const Field& f, int q) {
  if (q < 0) throw ContractError("dealias_power: negative exponent");
  if (q == 0) return Field::constant(f.grid(), 1.0);
  if (q == 1) return f;
  const int m = padded_size(f.grid().size(), q);
  std::vector<double> s = padded_samples(f, m);
  for (auto& x : s) {
    double y = x;
    for (int i = 1; i < q; ++i) y *= x;
    x = y;
  }
  return truncate_to(f.grid(), s);
}

double integral_of_power(const Field& f, int q) {
  if (q < 0) throw ContractError("integral_of_power: negative exponent");
  const int m = padded_size(f.grid().size(), q);
  const auto s = padded_samples(f, m);
  double acc = 0.0;
  for (double x : s) {
    double y = 1.0;
    for (int i = 0; i < q; ++i) y *= x;
    acc += y;
  }
  return f.grid().period() * acc / m;
}

double integral(const Field& f) { return f.grid().period() * f.half_spectrum()[0].real(); }

Field resample(const Field& f, int n_fine) {
  const int n = f.grid().size();
  if (n_fine < n) throw ContractError("resample: target grid must not be coarser");
  const Grid fine(f.grid().half_length(), n_fine);
  return Field::from_half_spectrum(fine, pad_half(f.half_spectrum(), n, n_fine));
}

}  // namespace nlwave
