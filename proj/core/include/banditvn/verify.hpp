#pragma once

// Deterministic invariant suite for batch traces.
//
// Each invariant tracks the worst slack seen over all checks. Slack is
// "allowed minus observed", so a check passes when its slack is >= 0.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "banditvn/harness.hpp"
#include "banditvn/linalg.hpp"

namespace banditvn::verify {

enum class Invariant {
  EigenvalueRelation,
  OmegaHypothesis,
  DistanceLemma,
  TraceBound,
  Oracle2d,
  LambdaFloor,
  BatchAccounting,
  RegretMonotone,
};
inline constexpr std::size_t kInvariantCount = 8;

std::string_view to_string(Invariant inv);

struct InvariantResult {
  Invariant invariant = Invariant::EigenvalueRelation;
  // Informational results are reported but never fail the suite.
  bool informational = false;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_slack = 0.0;
  std::string worst_where;

  bool passed() const { return violations == 0; }
};

// Plain-value view of one batch. observe() builds it from a BatchContext;
// tests may construct or corrupt one directly.
struct BatchSnapshot {
  std::size_t run_id = 0;
  std::size_t batch = 0;
  linalg::EigenDecomp eig_before;
  linalg::Vec center;
  std::vector<linalg::Vec> actions;
  double weight = 0.0;
  double lambda_min_after = 0.0;
  double lambda_max_after = 0.0;
  double trace_after = 0.0;
  std::size_t steps_after = 0;
  double cum_regret = 0.0;
};

struct CheckerSettings {
  std::size_t dim = 2;
  double lambda0 = 2.0;
  // Actions expected per batch (2(d-1) for the batch policy).
  std::size_t actions_per_batch = 2;
  // Batch geometry checks (distance lemma, d = 2 oracle) need the batch policy.
  bool batch_geometry = true;
  // The relation and trace bound are proved under omega <= C sqrt(lambda_max).
  // When the weights do not satisfy that, these results become informational.
  bool omega_hypothesis_holds = true;
};

double relation_factor(std::size_t dim);
double trace_bound(std::size_t dim, double lambda0, std::size_t batch);
// 1 / (12 sqrt(d-1))
double omega_constant(std::size_t dim);

class InvariantChecker {
 public:
  explicit InvariantChecker(const CheckerSettings& settings);

  void observe(const harness::BatchContext& ctx);
  void check(const BatchSnapshot& snap);

  std::vector<InvariantResult> results() const;
  const InvariantResult& result(Invariant inv) const;

 private:
  void record(Invariant inv, double slack, const BatchSnapshot& snap);

  CheckerSettings settings_;
  std::vector<InvariantResult> results_;
  std::size_t last_run_ = static_cast<std::size_t>(-1);
  double last_regret_ = 0.0;
};

struct VerifyReport {
  std::vector<InvariantResult> invariants;
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  std::vector<std::string> run_errors;

  bool passed() const;
};

// Simulates every configured run sequentially and checks every batch,
// ignoring record_every.
VerifyReport verify(const harness::ExperimentConfig& config);

// One line per invariant: PASS/FAIL/INFO, name, checks, violations, worst slack.
std::string format_report(const VerifyReport& report);

// Feeds build_actions directly with chosen centers and the largest weight the
// hypothesis allows, bypassing the estimator. Strategies cycle per sequence:
// random centers, top eigenvector, bottom eigenvector, and a per-step mix.
struct AdversarialResult {
  InvariantResult relation;
  InvariantResult distance;
  std::size_t steps = 0;
};
AdversarialResult adversarial_center_check(std::size_t dim, std::size_t sequences,
                                           std::size_t length, std::uint64_t seed);

}  // namespace banditvn::verify
