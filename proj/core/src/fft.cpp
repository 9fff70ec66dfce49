#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace nlwave::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  explicit PlanPair(int n) {
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> cplx(static_cast<std::size_t>(n / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
    inverse = fftw_plan_dft_c2r_1d(n, c, real.data(), flags | FFTW_DESTROY_INPUT);
  }
  ~PlanPair() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

// The FFTW planner is not reentrant; plans are created under this lock and
// never destroyed before exit.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace

void forward_real(std::span<const double> samples, std::span<std::complex<double>> half) {
  const int n = static_cast<int>(samples.size());
  const auto& p = plans_for(n);
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(half.data()));
  const double scale = 1.0 / n;
  for (std::size_t m = 0; m < half.size(); ++m) {
    half[m] *= (m % 2 == 0) ? scale : -scale;
  }
  half[0].imag(0.0);
  half[half.size() - 1].imag(0.0);
}

void inverse_real(std::span<const std::complex<double>> half, std::span<double> samples) {
  const int n = static_cast<int>(samples.size());
  const auto& p = plans_for(n);
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(half.begin(), half.end());
  for (std::size_t m = 1; m < scratch.size(); m += 2) scratch[m] = -scratch[m];
  fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                       samples.data());
}

}  // namespace nlwave::detail
