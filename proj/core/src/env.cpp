#include "banditvn/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "banditvn/error.hpp"

namespace banditvn {

double Rng::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace banditvn

namespace banditvn::env {

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::Vanishing:
      return "vanishing";
    case NoiseMode::VanishingPlusFloor:
      return "vanishing_floor";
    case NoiseMode::Unit:
      return "unit";
  }
  return "unknown";
}

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "vanishing") return NoiseMode::Vanishing;
  if (name == "vanishing_floor") return NoiseMode::VanishingPlusFloor;
  if (name == "unit") return NoiseMode::Unit;
  throw ConfigError("unknown noise mode '" + std::string(name) +
                    "' (expected vanishing, vanishing_floor or unit)");
}

void EnvironmentSpec::validate() const {
  if (dim < 2) throw ConfigError("environment: dim must be >= 2");
  if (theta.size() != dim) {
    throw ConfigError("environment: theta has " + std::to_string(theta.size()) +
                      " entries, expected " + std::to_string(dim));
  }
  if (std::abs(linalg::norm(theta) - 1.0) > 1e-12) {
    throw ConfigError("environment: theta must have unit norm");
  }
  if (!(floor_sigma2 >= 0.0)) throw ConfigError("environment: floor_sigma2 must be >= 0");
  if (noise_mode == NoiseMode::VanishingPlusFloor && !(floor_sigma2 > 0.0)) {
    throw ConfigError("environment: vanishing_floor noise requires floor_sigma2 > 0");
  }
  if (!std::isfinite(floor_mu)) throw ConfigError("environment: floor_mu must be finite");
}

void require_unit(std::span<const double> v, std::string_view what, double tol) {
  const double n = linalg::norm(v);
  if (!(std::abs(n - 1.0) <= tol)) {
    throw PreconditionError(std::string(what) + " must be a unit vector (norm " +
                            std::to_string(n) + ")");
  }
}

linalg::Vec random_unit_vector(std::size_t dim, Rng& rng) {
  if (dim < 2) throw PreconditionError("random_unit_vector: dim must be >= 2");
  linalg::Vec v(dim);
  double n = 0.0;
  do {
    for (double& x : v) x = rng.normal();
    n = linalg::norm(v);
  } while (n < 1e-150);
  for (double& x : v) x /= n;
  return v;
}

namespace {

// Half squared distance ||theta - a||^2 / 2, which equals 1 - <theta, a> on
// the sphere and is free of cancellation when a is close to theta.
double half_squared_distance(std::span<const double> theta, std::span<const double> a) {
  return 0.5 * linalg::squared_distance(theta, a);
}

}  // namespace

RewardSample sample_reward(const EnvironmentSpec& spec, std::span<const double> action, Rng& rng) {
  require_unit(action, "sample_reward: action");
  if (action.size() != spec.dim) throw PreconditionError("sample_reward: dimension mismatch");

  RewardSample out;
  // 1 - m^2 = (1 - m)(1 + m) = g (2 - g) with g = 1 - m.
  const double gap = std::clamp(half_squared_distance(spec.theta, action), 0.0, 2.0);
  // Playing theta itself yields mean 1 exactly, whatever rounding the dot product carries.
  out.mean = gap == 0.0 ? 1.0 : std::clamp(linalg::dot(spec.theta, action), -1.0, 1.0);
  const double vanishing_var = std::max(0.0, gap * (2.0 - gap));

  double mean = out.mean;
  double variance = 0.0;
  switch (spec.noise_mode) {
    case NoiseMode::Vanishing:
      variance = vanishing_var;
      break;
    case NoiseMode::VanishingPlusFloor:
      variance = vanishing_var + spec.floor_sigma2;
      mean += spec.floor_mu;
      break;
    case NoiseMode::Unit:
      variance = 1.0;
      break;
  }
  out.noise_std = std::sqrt(variance);
  out.value = out.noise_std > 0.0 ? mean + out.noise_std * rng.normal() : mean;
  return out;
}

double instantaneous_regret(const EnvironmentSpec& spec, std::span<const double> action) {
  require_unit(action, "instantaneous_regret: action");
  return std::max(0.0, half_squared_distance(spec.theta, action));
}

}  // namespace banditvn::env
