#include "banditvn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"
#include "banditvn/oracle2d.hpp"
#include "banditvn/policies.hpp"
#include "banditvn/rng.hpp"

namespace banditvn::verify {

std::string_view to_string(Invariant inv) {
  switch (inv) {
    case Invariant::EigenvalueRelation:
      return "eigenvalue_relation";
    case Invariant::OmegaHypothesis:
      return "omega_hypothesis";
    case Invariant::DistanceLemma:
      return "distance_lemma";
    case Invariant::TraceBound:
      return "trace_bound";
    case Invariant::Oracle2d:
      return "oracle_2d";
    case Invariant::LambdaFloor:
      return "lambda_floor";
    case Invariant::BatchAccounting:
      return "batch_accounting";
    case Invariant::RegretMonotone:
      return "regret_monotone";
  }
  return "unknown";
}

double relation_factor(std::size_t dim) {
  return 2.0 / (3.0 * static_cast<double>(dim - 1));
}

double trace_bound(std::size_t dim, double lambda0, std::size_t batch) {
  const double d = static_cast<double>(dim);
  const double t = static_cast<double>(batch);
  return d * (d * t * t / 144.0 + std::sqrt(d * lambda0) * t / 6.0 + lambda0);
}

double omega_constant(std::size_t dim) {
  return 1.0 / (12.0 * std::sqrt(static_cast<double>(dim - 1)));
}

namespace {

InvariantResult fresh(Invariant inv) {
  InvariantResult r;
  r.invariant = inv;
  r.worst_slack = std::numeric_limits<double>::infinity();
  return r;
}

std::string where(std::size_t run_id, std::size_t batch) {
  return "run " + std::to_string(run_id) + " batch " + std::to_string(batch);
}

void update(InvariantResult& r, double slack, const std::string& at) {
  ++r.checks;
  if (!(slack >= 0.0)) ++r.violations;
  if (!(slack >= r.worst_slack)) {
    r.worst_slack = slack;
    r.worst_where = at;
  }
}

double relation_slack(std::size_t dim, double lmin, double lmax) {
  return lmin - std::sqrt(relation_factor(dim) * lmax) + 1e-9 * lmax;
}

double distance_slack(const linalg::Vec& center, const linalg::Vec& action, double lmin_before) {
  return 2.0 / lmin_before + 1e-9 - linalg::squared_distance(action, center);
}

}  // namespace

InvariantChecker::InvariantChecker(const CheckerSettings& settings) : settings_(settings) {
  for (std::size_t i = 0; i < kInvariantCount; ++i) {
    results_.push_back(fresh(static_cast<Invariant>(i)));
  }
  const bool geometry = settings_.batch_geometry;
  results_[static_cast<std::size_t>(Invariant::EigenvalueRelation)].informational =
      !settings_.omega_hypothesis_holds;
  results_[static_cast<std::size_t>(Invariant::TraceBound)].informational =
      !settings_.omega_hypothesis_holds;
  results_[static_cast<std::size_t>(Invariant::OmegaHypothesis)].informational =
      !settings_.omega_hypothesis_holds;
  results_[static_cast<std::size_t>(Invariant::DistanceLemma)].informational = !geometry;
  results_[static_cast<std::size_t>(Invariant::Oracle2d)].informational =
      !geometry || settings_.dim != 2;
}

void InvariantChecker::record(Invariant inv, double slack, const BatchSnapshot& snap) {
  update(results_[static_cast<std::size_t>(inv)], slack, where(snap.run_id, snap.batch));
}

void InvariantChecker::observe(const harness::BatchContext& ctx) {
  BatchSnapshot snap;
  snap.run_id = ctx.run_id;
  snap.batch = ctx.batch;
  snap.eig_before = ctx.eig_before;
  snap.center = ctx.plan.center;
  snap.actions = ctx.plan.actions;
  snap.weight = ctx.plan.weight;
  snap.lambda_min_after = ctx.record.lambda_min;
  snap.lambda_max_after = ctx.record.lambda_max;
  snap.trace_after = ctx.state_after.design().trace();
  snap.steps_after = ctx.state_after.steps();
  snap.cum_regret = ctx.record.cum_regret;
  check(snap);
}

void InvariantChecker::check(const BatchSnapshot& snap) {
  const std::size_t d = settings_.dim;
  const double lmin = snap.lambda_min_after;
  const double lmax = snap.lambda_max_after;

  record(Invariant::EigenvalueRelation, relation_slack(d, lmin, lmax), snap);

  const double allowed = omega_constant(d) * std::sqrt(snap.eig_before.max());
  record(Invariant::OmegaHypothesis, allowed * (1.0 + 1e-12) - snap.weight, snap);

  const double bound = trace_bound(d, settings_.lambda0, snap.batch);
  record(Invariant::TraceBound, bound * (1.0 + 1e-9) - snap.trace_after, snap);

  record(Invariant::LambdaFloor, lmin - settings_.lambda0 + 1e-9 * std::max(1.0, lmax), snap);

  const double expected_steps =
      static_cast<double>(snap.batch) * static_cast<double>(settings_.actions_per_batch);
  record(Invariant::BatchAccounting,
         0.0 - std::abs(static_cast<double>(snap.steps_after) - expected_steps) + 0.0, snap);

  if (snap.run_id != last_run_) {
    last_run_ = snap.run_id;
    last_regret_ = 0.0;
  }
  record(Invariant::RegretMonotone, snap.cum_regret - last_regret_, snap);
  last_regret_ = snap.cum_regret;

  if (!settings_.batch_geometry) return;

  const double lmin_before = snap.eig_before.min();
  for (const auto& a : snap.actions) {
    record(Invariant::DistanceLemma, distance_slack(snap.center, a, lmin_before), snap);
  }

  if (d == 2) {
    oracle2d::Oracle2dInput in;
    in.lambda_min = lmin_before;
    in.lambda_max = snap.eig_before.max();
    in.omega = snap.weight;
    in.alpha = std::clamp(linalg::dot(snap.eig_before.eigenvectors[0], snap.center), -1.0, 1.0);
    const double predicted = oracle2d::exact_min_eigenvalue_2d(in);
    record(Invariant::Oracle2d, 1e-9 * std::max(1.0, std::abs(predicted)) - std::abs(predicted - lmin),
           snap);
  }
}

std::vector<InvariantResult> InvariantChecker::results() const { return results_; }

const InvariantResult& InvariantChecker::result(Invariant inv) const {
  return results_[static_cast<std::size_t>(inv)];
}

bool VerifyReport::passed() const {
  if (failed_runs > 0) return false;
  return std::all_of(invariants.begin(), invariants.end(), [](const InvariantResult& r) {
    return r.informational || r.passed();
  });
}

VerifyReport verify(const harness::ExperimentConfig& config) {
  config.validate();
  const policies::PolicyConfig pc = config.policy_config();

  CheckerSettings settings;
  settings.dim = config.dim;
  settings.lambda0 = pc.resolved_lambda0();
  const bool batch_policy = config.policy == policies::PolicyKind::LinUcbVn;
  settings.actions_per_batch = batch_policy ? 2 * (config.dim - 1) : 1;
  settings.batch_geometry = batch_policy;
  settings.omega_hypothesis_holds = batch_policy &&
                                    config.omega_mode == policies::OmegaMode::VanishingWeights &&
                                    config.first_batch == policies::FirstBatchWeight::Omega;

  InvariantChecker checker(settings);
  VerifyReport report;
  report.runs = config.runs;
  const harness::BatchObserver observer = [&](const harness::BatchContext& ctx) {
    checker.observe(ctx);
  };
  for (std::size_t r = 0; r < config.runs; ++r) {
    const harness::RunTrace trace = harness::simulate_run(config, r, observer);
    if (trace.status != harness::RunStatus::Ok) {
      ++report.failed_runs;
      report.run_errors.push_back("run " + std::to_string(r) + ": " + trace.message);
    }
  }
  report.invariants = checker.results();
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::string out;
  char buf[256];
  for (const auto& r : report.invariants) {
    const char* tag = r.passed() ? "PASS" : (r.informational ? "INFO" : "FAIL");
    if (r.checks == 0) tag = "SKIP";
    std::snprintf(buf, sizeof buf, "%s  %-20s checks=%zu violations=%zu worst_slack=%.6g", tag,
                  std::string(to_string(r.invariant)).c_str(), r.checks, r.violations,
                  r.checks ? r.worst_slack : 0.0);
    out += buf;
    if (r.checks && !r.worst_where.empty()) out += " at " + r.worst_where;
    out += '\n';
  }
  std::snprintf(buf, sizeof buf, "runs=%zu failed_runs=%zu\n", report.runs, report.failed_runs);
  out += buf;
  for (const auto& e : report.run_errors) out += "  " + e + '\n';
  out += report.passed() ? "verify: PASS\n" : "verify: FAIL\n";
  return out;
}

AdversarialResult adversarial_center_check(std::size_t dim, std::size_t sequences,
                                           std::size_t length, std::uint64_t seed) {
  AdversarialResult out;
  out.relation = fresh(Invariant::EigenvalueRelation);
  out.distance = fresh(Invariant::DistanceLemma);
  const double lambda0 = policies::compute_lambda0(dim);
  const double c_omega = omega_constant(dim);

  for (std::size_t s = 0; s < sequences; ++s) {
    Rng rng(run_seed(seed, s));
    linalg::SymMat v = linalg::SymMat::identity(dim, lambda0);
    const std::size_t strategy = s % 4;
    for (std::size_t t = 1; t <= length; ++t) {
      const linalg::EigenDecomp eig = linalg::eigh(v);
      std::size_t pick = strategy;
      if (strategy == 3) pick = static_cast<std::size_t>(rng() % 3);
      linalg::Vec center;
      switch (pick) {
        case 1:
          center = eig.eigenvectors.back();
          break;
        case 2:
          center = eig.eigenvectors.front();
          break;
        default:
          center = env::random_unit_vector(dim, rng);
      }
      if (rng.uniform() < 0.5) {
        for (double& x : center) x = -x;
      }
      // Mostly the largest admissible weight, sometimes a random smaller one.
      double w = c_omega * std::sqrt(eig.max());
      if (rng.uniform() < 0.25) w *= rng.uniform();
      if (!(w > 0.0)) w = c_omega * std::sqrt(eig.max());

      const auto actions = policies::build_actions(center, eig);
      const std::string at = "sequence " + std::to_string(s) + " step " + std::to_string(t);
      for (const auto& a : actions) {
        update(out.distance, distance_slack(center, a, eig.min()), at);
        linalg::rank_one_add_inplace(v, w, a);
      }
      const linalg::EigenDecomp after = linalg::eigh(v);
      update(out.relation, relation_slack(dim, after.min(), after.max()), at);
      ++out.steps;
    }
  }
  return out;
}

}  // namespace banditvn::verify
