#pragma once

#include <cstdint>
#include <random>

#include "nlwave/spectral.hpp"

namespace nlwave {

/// Shape of a random trigonometric polynomial: modes |k| <= max_mode with
/// Gaussian coefficients damped by (1 + k^2)^(-decay/2).
struct BandLimitedSpec {
  int max_mode = 16;
  double decay = 1.0;
  double amplitude = 1.0;
  bool include_mean = true;
};

/// Generator for sample `index` of a seeded corpus. Independent of the grid, so
/// the same (seed, index) gives the same function at every resolution.
std::mt19937_64 corpus_rng(std::uint64_t seed, std::uint64_t index);

/// Draws a real band-limited field. Throws ContractError if max_mode is not
/// strictly inside the grid band.
Field random_bandlimited(const Grid& grid, std::mt19937_64& rng, const BandLimitedSpec& spec = {});

}  // namespace nlwave
