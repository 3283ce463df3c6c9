#pragma once

// Seeded multi-run experiments.
//
// Run r draws everything from Rng(base_seed ^ splitmix64(r)): first theta
// (when random), then one word seeding the policy's stream and one word
// seeding the reward stream. Runs share no mutable state, and aggregation
// is a sequential reduce in run_id order, so the thread count never
// changes the output.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "banditvn/env.hpp"
#include "banditvn/estimator.hpp"
#include "banditvn/linalg.hpp"
#include "banditvn/policies.hpp"

namespace banditvn::harness {

struct ExperimentConfig {
  std::size_t dim = 2;
  std::size_t horizon_batches = 1000;
  std::size_t runs = 10;
  std::uint64_t base_seed = 0;
  std::optional<std::size_t> record_every;  // nullopt = max(1, T/2000)
  std::optional<double> delta;              // nullopt = 1/T
  std::optional<double> lambda0;            // nullopt = auto
  policies::PolicyKind policy = policies::PolicyKind::LinUcbVn;
  policies::OmegaMode omega_mode = policies::OmegaMode::VanishingWeights;
  policies::FirstBatchWeight first_batch = policies::FirstBatchWeight::Omega;
  policies::MaximizerSettings maximizer;
  env::NoiseMode noise = env::NoiseMode::Vanishing;
  double floor_mu = 0.0;
  double floor_sigma2 = 0.0;
  std::optional<linalg::Vec> theta;  // nullopt = random per run
  std::size_t parallelism = 0;       // 0 = hardware concurrency

  std::size_t resolved_record_every() const;
  double resolved_delta() const;
  policies::PolicyConfig policy_config() const;
  // Every config error surfaces here, before any run starts.
  void validate() const;
};

struct BatchRecord {
  std::size_t run_id = 0;
  std::size_t batch = 0;
  std::size_t step = 0;
  double cum_regret = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double beta = 0.0;
  bool in_confidence = false;
  double weight = 0.0;
};

enum class RunStatus { Ok, Failed };

struct RunTrace {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::size_t batches_completed = 0;
  double final_cum_regret = 0.0;
  // theta inside the confidence set after every batch (not just recorded ones).
  bool always_in_confidence = true;
  std::vector<BatchRecord> records;
};

struct AggregateRow {
  std::size_t batch = 0;
  std::size_t step = 0;
  double mean_cum_regret = 0.0;
  double std_cum_regret = 0.0;
  double mean_lambda_min = 0.0;
  double mean_lambda_max = 0.0;
  double confidence_fraction = 0.0;
};

struct AggregateTrace {
  std::vector<AggregateRow> rows;
};

struct ExperimentResult {
  std::vector<RunTrace> runs;
  AggregateTrace aggregate;
};

// Everything a per-batch observer may want to inspect. References are only
// valid during the callback.
struct BatchContext {
  std::size_t run_id = 0;
  std::size_t batch = 0;
  const linalg::Vec& theta;
  const policies::BatchPlan& plan;
  const linalg::EigenDecomp& eig_before;
  const estimator::EstimatorState& state_after;
  const BatchRecord& record;
};
using BatchObserver = std::function<void(const BatchContext&)>;

// One complete run. Numerical errors are caught and reported through the
// returned status. The observer, when set, sees every batch.
RunTrace simulate_run(const ExperimentConfig& config, std::size_t run_id,
                      const BatchObserver& observer = {});

ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-batch mean / sample std over successful runs, aligned on batch index.
AggregateTrace aggregate(const std::vector<RunTrace>& runs);

}  // namespace banditvn::harness
