#include "banditvn/estimator.hpp"

#include <cmath>
#include <string>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"

namespace banditvn::estimator {

double confidence_radius(double lambda0, double delta, double logdet_ratio) {
  // logdet_ratio >= 0 mathematically; rounding can push it a hair below.
  const double inner = 2.0 * std::log(1.0 / delta) + std::max(0.0, logdet_ratio);
  const double root = std::sqrt(inner) + std::sqrt(lambda0);
  return root * root;
}

EstimatorState::EstimatorState(std::size_t dim, double lambda0, double delta)
    : lambda0_(lambda0),
      delta_(delta),
      design_(linalg::SymMat::identity(dim < 2 ? 2 : dim, lambda0)),
      response_(dim, 0.0),
      theta_tilde_(dim, 0.0),
      logdet_v0_(static_cast<double>(dim) * std::log(lambda0)),
      logdet_(logdet_v0_) {
  if (dim < 2) throw ConfigError("estimator: dim must be >= 2");
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
    throw ConfigError("estimator: lambda0 must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("estimator: delta must lie in (0, 1), got " + std::to_string(delta));
  }
  eig_ = linalg::eigh(design_);
}

void EstimatorState::absorb(std::span<const double> action, double reward, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw PreconditionError("absorb: weight must be positive and finite");
  }
  if (action.size() != dim()) throw PreconditionError("absorb: dimension mismatch");
  env::require_unit(action, "absorb: action");

  linalg::rank_one_add_inplace(design_, weight, action);
  for (std::size_t i = 0; i < response_.size(); ++i) response_[i] += weight * reward * action[i];

  const linalg::Cholesky chol(design_);
  linalg::Vec x = chol.solve(response_);
  linalg::Vec r = design_.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = response_[i] - r[i];
  const linalg::Vec dx = chol.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  theta_tilde_ = std::move(x);
  logdet_ = chol.logdet();
  ++steps_;
  eig_current_ = false;
}

void EstimatorState::refresh_eig() {
  eig_ = linalg::eigh(design_);
  eig_current_ = true;
}

const linalg::EigenDecomp& EstimatorState::eig() const {
  if (!eig_current_) {
    throw InvariantError("estimator: eigendecomposition is stale; call refresh_eig()");
  }
  return eig_;
}

double EstimatorState::beta() const {
  return confidence_radius(lambda0_, delta_, logdet_ - logdet_v0_);
}

ConfidenceReport EstimatorState::confidence_report(std::span<const double> theta) const {
  env::require_unit(theta, "confidence_report: theta");
  linalg::Vec diff(theta.begin(), theta.end());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= theta_tilde_[i];
  ConfidenceReport out;
  out.beta = beta();
  out.mahalanobis2 = std::max(0.0, design_.quadratic_form(diff));
  out.member = out.mahalanobis2 <= out.beta;
  return out;
}

}  // namespace banditvn::estimator
