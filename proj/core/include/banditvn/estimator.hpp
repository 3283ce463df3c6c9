#pragma once

// Weighted regularised least squares on the sphere.
//
//   V_t   = lambda0 I + sum_s w_s a_s a_s^T
//   b_t   = sum_s w_s r_s a_s
//   theta = V_t^{-1} b_t
//   beta  = ( sqrt(2 log(1/delta) + log det V_t - log det V_0) + sqrt(lambda0) )^2
//
// The confidence set is { x : ||x - theta||^2_{V_t} <= beta }.

#include <cstddef>
#include <span>

#include "banditvn/linalg.hpp"

namespace banditvn::estimator {

struct ConfidenceReport {
  double beta = 0.0;
  bool member = false;
  double mahalanobis2 = 0.0;
};

class EstimatorState {
 public:
  // Throws ConfigError unless lambda0 > 0 and delta in (0, 1).
  EstimatorState(std::size_t dim, double lambda0, double delta);

  // Adds one weighted observation and re-solves for theta_tilde. The
  // eigendecomposition is left stale until refresh_eig().
  void absorb(std::span<const double> action, double reward, double weight);
  void refresh_eig();

  double beta() const;
  ConfidenceReport confidence_report(std::span<const double> theta) const;

  std::size_t dim() const noexcept { return design_.dim(); }
  double lambda0() const noexcept { return lambda0_; }
  double delta() const noexcept { return delta_; }
  const linalg::SymMat& design() const noexcept { return design_; }
  const linalg::Vec& response() const noexcept { return response_; }
  const linalg::Vec& theta_tilde() const noexcept { return theta_tilde_; }
  double logdet() const noexcept { return logdet_; }
  double logdet_v0() const noexcept { return logdet_v0_; }
  std::size_t steps() const noexcept { return steps_; }
  bool eig_current() const noexcept { return eig_current_; }
  // Throws InvariantError when stale.
  const linalg::EigenDecomp& eig() const;

 private:
  double lambda0_;
  double delta_;
  linalg::SymMat design_;
  linalg::Vec response_;
  linalg::Vec theta_tilde_;
  double logdet_v0_;
  double logdet_;
  std::size_t steps_ = 0;
  linalg::EigenDecomp eig_;
  bool eig_current_ = true;
};

// Radius formula on its own, for bookkeeping and tests.
double confidence_radius(double lambda0, double delta, double logdet_ratio);

}  // namespace banditvn::estimator
