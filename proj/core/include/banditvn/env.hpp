#pragma once

// Stochastic linear bandit on the unit sphere.
//
// The hidden parameter theta and every action are unit vectors. The reward
// of action a is Gaussian with mean <theta, a> and a mode-dependent variance:
//
//   Vanishing           N(m, 1 - m^2)
//   VanishingPlusFloor  N(m + floor_mu, 1 - m^2 + floor_sigma2)
//   Unit                N(m, 1)
//
// where m = clamp(<theta, a>, -1, 1).

#include <cstdint>
#include <span>
#include <string_view>

#include "banditvn/linalg.hpp"
#include "banditvn/rng.hpp"

namespace banditvn::env {

enum class NoiseMode { Vanishing, VanishingPlusFloor, Unit };

std::string_view to_string(NoiseMode mode);
NoiseMode parse_noise_mode(std::string_view name);

struct EnvironmentSpec {
  std::size_t dim = 2;
  linalg::Vec theta;
  NoiseMode noise_mode = NoiseMode::Vanishing;
  double floor_mu = 0.0;
  double floor_sigma2 = 0.0;
  std::uint64_t seed = 0;

  // Throws ConfigError on a broken invariant.
  void validate() const;
};

struct RewardSample {
  double mean = 0.0;
  double noise_std = 0.0;
  double value = 0.0;
};

// Normalised standard-normal draw: uniform on the sphere.
linalg::Vec random_unit_vector(std::size_t dim, Rng& rng);

RewardSample sample_reward(const EnvironmentSpec& spec, std::span<const double> action, Rng& rng);

// 1 - <theta, a>, clamped at zero against rounding.
double instantaneous_regret(const EnvironmentSpec& spec, std::span<const double> action);

// Throws PreconditionError unless | ||v|| - 1 | <= tol.
void require_unit(std::span<const double> v, std::string_view what, double tol = 1e-9);

}  // namespace banditvn::env
