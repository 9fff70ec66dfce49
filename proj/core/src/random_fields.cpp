#include "nlwave/random_fields.hpp"

#include <cmath>

#include "nlwave/errors.hpp"

namespace nlwave {

std::mt19937_64 corpus_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Field random_bandlimited(const Grid& grid, std::mt19937_64& rng, const BandLimitedSpec& spec) {
  if (spec.max_mode < 1 || spec.max_mode >= grid.size() / 2) {
    throw ContractError("random_bandlimited: max_mode must lie in [1, N/2)");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> half(static_cast<std::size_t>(grid.half_size()));
  const double mean = gauss(rng);
  if (spec.include_mean) half[0] = spec.amplitude * mean;
  for (int k = 1; k <= spec.max_mode; ++k) {
    const double damp = std::pow(1.0 + double(k) * k, -0.5 * spec.decay);
    const double re = gauss(rng);
    const double im = gauss(rng);
    half[static_cast<std::size_t>(k)] = spec.amplitude * damp * Complex{re, im};
  }
  return Field::from_half_spectrum(grid, std::move(half));
}

}  // namespace nlwave
