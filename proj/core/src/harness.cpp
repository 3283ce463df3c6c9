#include "banditvn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "banditvn/error.hpp"
#include "banditvn/rng.hpp"

namespace banditvn::harness {

std::size_t ExperimentConfig::resolved_record_every() const {
  if (record_every) return *record_every;
  return std::max<std::size_t>(1, horizon_batches / 2000);
}

double ExperimentConfig::resolved_delta() const {
  if (delta) return *delta;
  // 1/T is outside (0, 1) for a single batch.
  return horizon_batches >= 2 ? 1.0 / static_cast<double>(horizon_batches) : 0.5;
}

policies::PolicyConfig ExperimentConfig::policy_config() const {
  policies::PolicyConfig pc;
  pc.kind = policy;
  pc.dim = dim;
  pc.delta = resolved_delta();
  pc.lambda0 = lambda0;
  pc.omega_mode = omega_mode;
  pc.first_batch = first_batch;
  pc.maximizer = maximizer;
  return pc;
}

void ExperimentConfig::validate() const {
  if (dim < 2 || dim > 64) throw ConfigError("dim must lie in [2, 64]");
  if (horizon_batches < 1) throw ConfigError("horizon_batches must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (record_every && *record_every < 1) throw ConfigError("record_every must be >= 1");
  policy_config().validate();
  if (theta) {
    env::EnvironmentSpec probe;
    probe.dim = dim;
    probe.theta = *theta;
    probe.noise_mode = noise;
    probe.floor_mu = floor_mu;
    probe.floor_sigma2 = floor_sigma2;
    probe.validate();
  } else {
    if (!(floor_sigma2 >= 0.0)) throw ConfigError("floor_sigma2 must be >= 0");
    if (noise == env::NoiseMode::VanishingPlusFloor && !(floor_sigma2 > 0.0)) {
      throw ConfigError("vanishing_floor noise requires floor_sigma2 > 0");
    }
  }
}

RunTrace simulate_run(const ExperimentConfig& config, std::size_t run_id,
                      const BatchObserver& observer) {
  RunTrace trace;
  trace.run_id = run_id;
  trace.seed = run_seed(config.base_seed, run_id);

  Rng master(trace.seed);
  env::EnvironmentSpec spec;
  spec.dim = config.dim;
  spec.theta = config.theta ? *config.theta : env::random_unit_vector(config.dim, master);
  spec.noise_mode = config.noise;
  spec.floor_mu = config.floor_mu;
  spec.floor_sigma2 = config.floor_sigma2;
  spec.seed = trace.seed;
  Rng policy_rng(master());
  Rng reward_rng(master());

  const std::size_t every = config.resolved_record_every();
  const std::size_t horizon = config.horizon_batches;
  trace.records.reserve(horizon / every + 1);

  double cum_regret = 0.0;
  std::size_t steps = 0;
  try {
    spec.validate();
    auto policy = policies::make_policy(config.policy_config(), spec.theta, policy_rng);
    std::vector<double> rewards;
    linalg::EigenDecomp eig_before;
    for (std::size_t t = 1; t <= horizon; ++t) {
      if (observer) eig_before = policy->estimator().eig();
      const policies::BatchPlan plan = policy->plan_batch();
      rewards.clear();
      for (const auto& action : plan.actions) {
        rewards.push_back(env::sample_reward(spec, action, reward_rng).value);
        cum_regret += env::instantaneous_regret(spec, action);
      }
      policy->observe(plan, rewards);
      steps += plan.actions.size();

      const estimator::EstimatorState& state = policy->estimator();
      const estimator::ConfidenceReport report = state.confidence_report(spec.theta);
      BatchRecord rec;
      rec.run_id = run_id;
      rec.batch = t;
      rec.step = steps;
      rec.cum_regret = cum_regret;
      rec.lambda_min = state.eig().min();
      rec.lambda_max = state.eig().max();
      rec.beta = report.beta;
      rec.in_confidence = report.member;
      rec.weight = plan.weight;
      if (!report.member) trace.always_in_confidence = false;
      if (t % every == 0 || t == horizon) trace.records.push_back(rec);
      trace.batches_completed = t;
      trace.final_cum_regret = cum_regret;
      if (observer) {
        observer(BatchContext{run_id, t, spec.theta, plan, eig_before, state, rec});
      }
    }
  } catch (const Error& e) {
    trace.status = RunStatus::Failed;
    trace.message = e.what();
  }
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.runs.resize(config.runs);

  std::size_t workers = config.parallelism;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.runs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < config.runs; r = next++) {
      result.runs[r] = simulate_run(config, r);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  result.aggregate = aggregate(result.runs);
  return result;
}

AggregateTrace aggregate(const std::vector<RunTrace>& runs) {
  AggregateTrace out;
  std::vector<const RunTrace*> ok;
  for (const auto& r : runs) {
    if (r.status == RunStatus::Ok) ok.push_back(&r);
  }
  if (ok.empty()) return out;
  std::size_t rows = ok.front()->records.size();
  for (const auto* r : ok) rows = std::min(rows, r->records.size());

  const double n = static_cast<double>(ok.size());
  out.rows.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    AggregateRow row;
    row.batch = ok.front()->records[i].batch;
    row.step = ok.front()->records[i].step;
    double sum_regret = 0.0, sum_min = 0.0, sum_max = 0.0, inside = 0.0;
    for (const auto* r : ok) {
      const BatchRecord& rec = r->records[i];
      if (rec.batch != row.batch) throw InvariantError("aggregate: runs are not batch-aligned");
      sum_regret += rec.cum_regret;
      sum_min += rec.lambda_min;
      sum_max += rec.lambda_max;
      inside += rec.in_confidence ? 1.0 : 0.0;
    }
    row.mean_cum_regret = sum_regret / n;
    row.mean_lambda_min = sum_min / n;
    row.mean_lambda_max = sum_max / n;
    row.confidence_fraction = inside / n;
    double ss = 0.0;
    for (const auto* r : ok) {
      const double dev = r->records[i].cum_regret - row.mean_cum_regret;
      ss += dev * dev;
    }
    row.std_cum_regret = ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace banditvn::harness
