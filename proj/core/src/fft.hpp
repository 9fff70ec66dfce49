#pragma once

#include <complex>
#include <span>

namespace nlwave::detail {

// Real transforms with the box phase folded in: for n samples on [-L, L)
//   forward: c_m = (-1)^m / n * sum_j u_j exp(-2 pi i m j / n),  m = 0..n/2
//   inverse: u_j = sum_k c_k exp(i xi_k x_j) from the Hermitian half spectrum.
// Plans are cached per size; execution is safe from multiple threads.
void forward_real(std::span<const double> samples, std::span<std::complex<double>> half);
void inverse_real(std::span<const std::complex<double>> half, std::span<double> samples);

}  // namespace nlwave::detail
