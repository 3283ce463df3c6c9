#pragma once

// Policies for the sphere bandit. A policy proposes a batch of actions with
// a common weight, then absorbs the observed rewards. Policies never see the
// hidden parameter (except FixedOracle, which is constructed from it).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "banditvn/estimator.hpp"
#include "banditvn/linalg.hpp"
#include "banditvn/rng.hpp"

namespace banditvn::policies {

enum class PolicyKind { LinUcbVn, LinUcbBaseline, FixedOracle };
enum class OmegaMode { VanishingWeights, UnitWeights };
// Weight of the very first batch: the vanishing-weight formula evaluated at
// V_0, or the constant 1.
enum class FirstBatchWeight { Omega, Unit };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
std::string_view to_string(OmegaMode mode);
OmegaMode parse_omega_mode(std::string_view name);
std::string_view to_string(FirstBatchWeight w);
FirstBatchWeight parse_first_batch_weight(std::string_view name);

struct MaximizerSettings {
  std::size_t grid_size = 1024;   // d = 2 angular grid
  std::size_t restarts = 32;      // d >= 3 random starts (plus the estimate's direction)
  std::size_t iterations = 200;   // d >= 3 projected gradient iterations per start
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::LinUcbVn;
  std::size_t dim = 2;
  double delta = 0.1;
  std::optional<double> lambda0;  // nullopt = auto
  OmegaMode omega_mode = OmegaMode::VanishingWeights;
  FirstBatchWeight first_batch = FirstBatchWeight::Omega;
  MaximizerSettings maximizer;

  // Auto lambda0 or the validated override. Throws ConfigError when an
  // override is below the eigenvalue-relation bound.
  double resolved_lambda0() const;
  void validate() const;
};

struct BatchPlan {
  std::vector<linalg::Vec> actions;
  double weight = 1.0;
  linalg::Vec center;
};

// max{2, sqrt(2/(3(d-1))) * d/(6 sqrt(d-1)) + 2/(3(d-1))}
double compute_lambda0(std::size_t dim);

// sqrt(lambda_max) / (12 sqrt(d-1) beta)
double omega(double lambda_max_prev, double beta_prev, std::size_t dim);

// Weight of batch `batch` (1-based) given the state after batch-1.
double batch_weight(const PolicyConfig& config, const estimator::EstimatorState& state,
                    std::size_t batch);

// Action pairs normalize(center +- v_i / sqrt(lambda_1)) for the d-1
// eigenvectors with the smallest eigenvalues, ordered (+1, -1, +2, -2, ...).
std::vector<linalg::Vec> build_actions(std::span<const double> center,
                                       const linalg::EigenDecomp& eig);

// Center is normalize(theta_tilde), or `center_prev` if theta_tilde ~ 0.
// Requires a current eigendecomposition (InvariantError otherwise).
BatchPlan build_batch(const estimator::EstimatorState& state, std::span<const double> center_prev,
                      double weight);

// argmax_{||a|| = 1} <theta_tilde, a> + sqrt(beta) ||a||_{V^{-1}}, with
// V^{-1} given through its eigendecomposition. `rng` feeds random starts
// for d >= 3 only.
linalg::Vec maximize_ucb(std::span<const double> theta_tilde, const linalg::EigenDecomp& eig,
                         double beta, const MaximizerSettings& settings, Rng& rng);
double ucb_objective(std::span<const double> theta_tilde, const linalg::EigenDecomp& eig,
                     double beta, std::span<const double> a);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual BatchPlan plan_batch() = 0;
  virtual void observe(const BatchPlan& plan, std::span<const double> rewards) = 0;
  virtual const estimator::EstimatorState& estimator() const = 0;
  // Batches completed so far.
  virtual std::size_t batches() const = 0;
};

class LinUcbVnPolicy final : public Policy {
 public:
  // Draws the initial center uniformly from the sphere using `rng`.
  LinUcbVnPolicy(const PolicyConfig& config, Rng& rng);

  BatchPlan plan_batch() override;
  void observe(const BatchPlan& plan, std::span<const double> rewards) override;
  const estimator::EstimatorState& estimator() const override { return state_; }
  std::size_t batches() const override { return batch_; }
  const linalg::Vec& center() const noexcept { return center_; }

 private:
  PolicyConfig config_;
  estimator::EstimatorState state_;
  linalg::Vec center_;
  std::size_t batch_ = 0;
};

class LinUcbBaselinePolicy final : public Policy {
 public:
  // `maximizer_seed` seeds the private stream used for random restarts.
  LinUcbBaselinePolicy(const PolicyConfig& config, std::uint64_t maximizer_seed);

  BatchPlan plan_batch() override;
  void observe(const BatchPlan& plan, std::span<const double> rewards) override;
  const estimator::EstimatorState& estimator() const override { return state_; }
  std::size_t batches() const override { return batch_; }

 private:
  PolicyConfig config_;
  estimator::EstimatorState state_;
  Rng maximizer_rng_;
  std::size_t batch_ = 0;
};

// Always plays theta. Keeps an estimator fed with weight-1 observations so
// that traces carry the same columns as the learning policies.
class FixedOraclePolicy final : public Policy {
 public:
  FixedOraclePolicy(const PolicyConfig& config, linalg::Vec theta);

  BatchPlan plan_batch() override;
  void observe(const BatchPlan& plan, std::span<const double> rewards) override;
  const estimator::EstimatorState& estimator() const override { return state_; }
  std::size_t batches() const override { return batch_; }

 private:
  linalg::Vec theta_;
  estimator::EstimatorState state_;
  std::size_t batch_ = 0;
};

// Builds the configured policy. `theta` is only read by FixedOracle;
// `rng` provides LinUCB-VN's random initial center and the baseline's
// maximizer seed.
std::unique_ptr<Policy> make_policy(const PolicyConfig& config, std::span<const double> theta,
                                    Rng& rng);

}  // namespace banditvn::policies
