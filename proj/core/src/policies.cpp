#include "banditvn/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"

namespace banditvn::policies {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::LinUcbVn:
      return "linucb-vn";
    case PolicyKind::LinUcbBaseline:
      return "linucb";
    case PolicyKind::FixedOracle:
      return "fixed";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "linucb-vn") return PolicyKind::LinUcbVn;
  if (name == "linucb") return PolicyKind::LinUcbBaseline;
  if (name == "fixed") return PolicyKind::FixedOracle;
  throw ConfigError("unknown policy '" + std::string(name) +
                    "' (expected linucb-vn, linucb or fixed)");
}

std::string_view to_string(OmegaMode mode) {
  return mode == OmegaMode::VanishingWeights ? "vanishing" : "unit";
}

OmegaMode parse_omega_mode(std::string_view name) {
  if (name == "vanishing") return OmegaMode::VanishingWeights;
  if (name == "unit") return OmegaMode::UnitWeights;
  throw ConfigError("unknown omega_mode '" + std::string(name) + "' (expected vanishing or unit)");
}

std::string_view to_string(FirstBatchWeight w) {
  return w == FirstBatchWeight::Omega ? "omega" : "unit";
}

FirstBatchWeight parse_first_batch_weight(std::string_view name) {
  if (name == "omega") return FirstBatchWeight::Omega;
  if (name == "unit") return FirstBatchWeight::Unit;
  throw ConfigError("unknown first_batch_weight '" + std::string(name) +
                    "' (expected omega or unit)");
}

double compute_lambda0(std::size_t dim) {
  if (dim < 2) throw ConfigError("compute_lambda0: dim must be >= 2");
  const double dm1 = static_cast<double>(dim - 1);
  const double d = static_cast<double>(dim);
  const double bound = std::sqrt(2.0 / (3.0 * dm1)) * (d / (6.0 * std::sqrt(dm1))) +
                       2.0 / (3.0 * dm1);
  return std::max(2.0, bound);
}

double PolicyConfig::resolved_lambda0() const {
  const double bound = compute_lambda0(dim);
  if (!lambda0) return bound;
  if (!(*lambda0 >= bound)) {
    throw ConfigError("lambda0 = " + std::to_string(*lambda0) +
                      " is below the eigenvalue-relation bound " + std::to_string(bound) +
                      " for d = " + std::to_string(dim));
  }
  return *lambda0;
}

void PolicyConfig::validate() const {
  if (dim < 2) throw ConfigError("policy: dim must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("policy: delta must lie in (0, 1)");
  (void)resolved_lambda0();
  if (maximizer.grid_size < 3) throw ConfigError("policy: maximizer grid_size must be >= 3");
  if (maximizer.iterations == 0) throw ConfigError("policy: maximizer iterations must be >= 1");
}

double omega(double lambda_max_prev, double beta_prev, std::size_t dim) {
  return std::sqrt(lambda_max_prev) /
         (12.0 * std::sqrt(static_cast<double>(dim - 1)) * beta_prev);
}

double batch_weight(const PolicyConfig& config, const estimator::EstimatorState& state,
                    std::size_t batch) {
  if (config.omega_mode == OmegaMode::UnitWeights) return 1.0;
  if (batch <= 1 && config.first_batch == FirstBatchWeight::Unit) return 1.0;
  return omega(state.eig().max(), state.beta(), config.dim);
}

std::vector<linalg::Vec> build_actions(std::span<const double> center,
                                       const linalg::EigenDecomp& eig) {
  const std::size_t d = eig.dim();
  if (center.size() != d) throw PreconditionError("build_actions: dimension mismatch");
  const double scale = 1.0 / std::sqrt(eig.min());
  std::vector<linalg::Vec> actions;
  actions.reserve(2 * (d - 1));
  linalg::Vec plus(d), minus(d);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const linalg::Vec& v = eig.eigenvectors[i];
    for (std::size_t k = 0; k < d; ++k) {
      plus[k] = center[k] + scale * v[k];
      minus[k] = center[k] - scale * v[k];
    }
    actions.push_back(linalg::normalized(plus));
    actions.push_back(linalg::normalized(minus));
  }
  return actions;
}

BatchPlan build_batch(const estimator::EstimatorState& state, std::span<const double> center_prev,
                      double weight) {
  const linalg::EigenDecomp& eig = state.eig();
  if (!(eig.min() > 1.0)) {
    throw InvariantError("build_batch: smallest eigenvalue must exceed 1");
  }
  BatchPlan plan;
  const linalg::Vec& tilde = state.theta_tilde();
  if (linalg::norm(tilde) > 1e-9) {
    plan.center = linalg::normalized(tilde);
  } else {
    plan.center.assign(center_prev.begin(), center_prev.end());
  }
  plan.actions = build_actions(plan.center, eig);
  plan.weight = weight;
  return plan;
}

// ---------------------------------------------------------------------------
// Baseline UCB maximisation on the sphere.

namespace {

// ||a||^2_{V^{-1}} from the eigendecomposition of V.
double inverse_norm2(const linalg::EigenDecomp& eig, std::span<const double> a) {
  double s = 0.0;
  for (std::size_t k = 0; k < eig.dim(); ++k) {
    const double p = linalg::dot(eig.eigenvectors[k], a);
    s += p * p / eig.eigenvalues[k];
  }
  return s;
}

linalg::Vec maximize_2d(std::span<const double> tilde, const linalg::EigenDecomp& eig,
                        double beta, std::size_t grid_size) {
  // V^{-1} = [[ia, ib], [ib, ic]]
  double ia = 0.0, ib = 0.0, ic = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& v = eig.eigenvectors[k];
    const double inv = 1.0 / eig.eigenvalues[k];
    ia += inv * v[0] * v[0];
    ib += inv * v[0] * v[1];
    ic += inv * v[1] * v[1];
  }
  const double sb = std::sqrt(beta);
  const double t0 = tilde[0], t1 = tilde[1];
  auto f = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double q = ia * c * c + 2.0 * ib * c * s + ic * s * s;
    return t0 * c + t1 * s + sb * std::sqrt(std::max(0.0, q));
  };

  const double step = 2.0 * std::numbers::pi / static_cast<double>(grid_size);
  std::size_t best_k = 0;
  double best_val = f(0.0);
  for (std::size_t k = 1; k < grid_size; ++k) {
    const double val = f(step * static_cast<double>(k));
    if (val > best_val) {
      best_val = val;
      best_k = k;
    }
  }

  // Golden-section refinement on the bracket around the best grid point.
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = step * (static_cast<double>(best_k) - 1.0);
  double hi = step * (static_cast<double>(best_k) + 1.0);
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  double phi = step * static_cast<double>(best_k);
  const double mid = 0.5 * (lo + hi);
  if (f(mid) > best_val) phi = mid;
  return {std::cos(phi), std::sin(phi)};
}

linalg::Vec tangent_gradient(std::span<const double> tilde, const linalg::EigenDecomp& eig,
                             double sqrt_beta, std::span<const double> a) {
  const std::size_t d = a.size();
  // grad = tilde + sqrt(beta) V^{-1} a / ||a||_{V^{-1}}
  linalg::Vec vinv_a(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double p = linalg::dot(eig.eigenvectors[k], a) / eig.eigenvalues[k];
    for (std::size_t i = 0; i < d; ++i) vinv_a[i] += p * eig.eigenvectors[k][i];
  }
  const double n = std::sqrt(std::max(1e-300, linalg::dot(vinv_a, a)));
  linalg::Vec g(d);
  for (std::size_t i = 0; i < d; ++i) g[i] = tilde[i] + sqrt_beta * vinv_a[i] / n;
  const double radial = linalg::dot(g, a);
  for (std::size_t i = 0; i < d; ++i) g[i] -= radial * a[i];
  return g;
}

linalg::Vec maximize_nd(std::span<const double> tilde, const linalg::EigenDecomp& eig,
                        double beta, const MaximizerSettings& settings, Rng& rng) {
  const std::size_t d = tilde.size();
  const double sqrt_beta = std::sqrt(beta);
  std::vector<linalg::Vec> starts;
  if (linalg::norm(tilde) > 1e-12) starts.push_back(linalg::normalized(tilde));
  // The eigenvector with the smallest eigenvalue maximises the bonus term.
  starts.push_back(eig.eigenvectors.front());
  for (std::size_t r = 0; r < settings.restarts; ++r) starts.push_back(env::random_unit_vector(d, rng));

  linalg::Vec best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (linalg::Vec a : starts) {
    double val = ucb_objective(tilde, eig, beta, a);
    double step = 1.0;
    for (std::size_t it = 0; it < settings.iterations; ++it) {
      const linalg::Vec g = tangent_gradient(tilde, eig, sqrt_beta, a);
      if (linalg::norm(g) < 1e-13) break;
      bool improved = false;
      linalg::Vec trial(d);
      for (; step > 1e-14; step *= 0.5) {
        for (std::size_t i = 0; i < d; ++i) trial[i] = a[i] + step * g[i];
        trial = linalg::normalized(trial);
        const double tv = ucb_objective(tilde, eig, beta, trial);
        if (tv > val) {
          a = trial;
          val = tv;
          improved = true;
          break;
        }
      }
      if (!improved) break;
      step = std::min(1.0, step * 2.0);
    }
    if (val > best_val) {
      best_val = val;
      best = a;
    }
  }
  return best;
}

}  // namespace

double ucb_objective(std::span<const double> theta_tilde, const linalg::EigenDecomp& eig,
                     double beta, std::span<const double> a) {
  return linalg::dot(theta_tilde, a) + std::sqrt(beta) * std::sqrt(inverse_norm2(eig, a));
}

linalg::Vec maximize_ucb(std::span<const double> theta_tilde, const linalg::EigenDecomp& eig,
                         double beta, const MaximizerSettings& settings, Rng& rng) {
  if (theta_tilde.size() != eig.dim()) throw PreconditionError("maximize_ucb: dimension mismatch");
  if (eig.dim() == 2) return maximize_2d(theta_tilde, eig, beta, settings.grid_size);
  return maximize_nd(theta_tilde, eig, beta, settings, rng);
}

// ---------------------------------------------------------------------------

LinUcbVnPolicy::LinUcbVnPolicy(const PolicyConfig& config, Rng& rng)
    : config_(config),
      state_(config.dim, config.resolved_lambda0(), config.delta),
      center_(env::random_unit_vector(config.dim, rng)) {
  config_.validate();
}

BatchPlan LinUcbVnPolicy::plan_batch() {
  const double weight = batch_weight(config_, state_, batch_ + 1);
  return build_batch(state_, center_, weight);
}

void LinUcbVnPolicy::observe(const BatchPlan& plan, std::span<const double> rewards) {
  if (rewards.size() != plan.actions.size()) {
    throw PreconditionError("observe: one reward per action required");
  }
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    state_.absorb(plan.actions[i], rewards[i], plan.weight);
  }
  state_.refresh_eig();
  center_ = plan.center;
  ++batch_;
}

LinUcbBaselinePolicy::LinUcbBaselinePolicy(const PolicyConfig& config,
                                           std::uint64_t maximizer_seed)
    : config_(config),
      state_(config.dim, config.resolved_lambda0(), config.delta),
      maximizer_rng_(maximizer_seed) {
  config_.validate();
}

BatchPlan LinUcbBaselinePolicy::plan_batch() {
  BatchPlan plan;
  plan.actions.push_back(maximize_ucb(state_.theta_tilde(), state_.eig(), state_.beta(),
                                      config_.maximizer, maximizer_rng_));
  plan.weight = 1.0;
  plan.center = plan.actions.front();
  return plan;
}

void LinUcbBaselinePolicy::observe(const BatchPlan& plan, std::span<const double> rewards) {
  if (rewards.size() != plan.actions.size()) {
    throw PreconditionError("observe: one reward per action required");
  }
  for (std::size_t i = 0; i < rewards.size(); ++i) state_.absorb(plan.actions[i], rewards[i], 1.0);
  state_.refresh_eig();
  ++batch_;
}

FixedOraclePolicy::FixedOraclePolicy(const PolicyConfig& config, linalg::Vec theta)
    : theta_(std::move(theta)), state_(config.dim, config.resolved_lambda0(), config.delta) {
  env::require_unit(theta_, "FixedOraclePolicy: theta");
}

BatchPlan FixedOraclePolicy::plan_batch() {
  BatchPlan plan;
  plan.actions.push_back(theta_);
  plan.weight = 1.0;
  plan.center = theta_;
  return plan;
}

void FixedOraclePolicy::observe(const BatchPlan& plan, std::span<const double> rewards) {
  for (std::size_t i = 0; i < rewards.size(); ++i) state_.absorb(plan.actions[i], rewards[i], 1.0);
  state_.refresh_eig();
  ++batch_;
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, std::span<const double> theta,
                                    Rng& rng) {
  switch (config.kind) {
    case PolicyKind::LinUcbVn:
      return std::make_unique<LinUcbVnPolicy>(config, rng);
    case PolicyKind::LinUcbBaseline:
      return std::make_unique<LinUcbBaselinePolicy>(config, rng());
    case PolicyKind::FixedOracle:
      return std::make_unique<FixedOraclePolicy>(config, linalg::Vec(theta.begin(), theta.end()));
  }
  throw ConfigError("make_policy: unknown policy kind");
}

}  // namespace banditvn::policies
