#include <benchmark/benchmark.h>

#include "banditvn/env.hpp"
#include "banditvn/estimator.hpp"
#include "banditvn/harness.hpp"
#include "banditvn/linalg.hpp"
#include "banditvn/policies.hpp"

using namespace banditvn;

namespace {

linalg::SymMat accumulated_design(std::size_t d, int updates, Rng& rng) {
  linalg::SymMat m = linalg::SymMat::identity(d, 2.0);
  for (int k = 0; k < updates; ++k) {
    linalg::rank_one_add_inplace(m, 0.5 + rng.uniform(), env::random_unit_vector(d, rng));
  }
  return m;
}

void BM_Eigh(benchmark::State& state) {
  Rng rng(1);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto m = accumulated_design(d, 100, rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eigh(m));
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(3)->Arg(5)->Arg(10)->Arg(32);

void BM_Absorb(benchmark::State& state) {
  Rng rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  estimator::EstimatorState s(d, 2.0, 0.01);
  const auto a = env::random_unit_vector(d, rng);
  for (auto _ : state) s.absorb(a, 0.3, 0.01);
}
BENCHMARK(BM_Absorb)->Arg(2)->Arg(5)->Arg(10);

void BM_VnBatch(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  policies::PolicyConfig c;
  c.dim = d;
  c.delta = 1e-4;
  Rng rng(3);
  env::EnvironmentSpec spec;
  spec.dim = d;
  spec.theta = env::random_unit_vector(d, rng);
  policies::LinUcbVnPolicy p(c, rng);
  std::vector<double> rewards;
  for (auto _ : state) {
    const auto plan = p.plan_batch();
    rewards.clear();
    for (const auto& a : plan.actions) rewards.push_back(env::sample_reward(spec, a, rng).value);
    p.observe(plan, rewards);
  }
}
BENCHMARK(BM_VnBatch)->Arg(2)->Arg(5);

void BM_MaximizeUcb(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  estimator::EstimatorState s(d, 2.0, 0.01);
  for (int k = 0; k < 50; ++k) s.absorb(env::random_unit_vector(d, rng), rng.normal(), 1.0);
  s.refresh_eig();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        policies::maximize_ucb(s.theta_tilde(), s.eig(), s.beta(), policies::MaximizerSettings{}, rng));
  }
}
BENCHMARK(BM_MaximizeUcb)->Arg(2)->Arg(3)->Arg(5);

void BM_SimulateRun(benchmark::State& state) {
  harness::ExperimentConfig c;
  c.dim = 2;
  c.horizon_batches = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::simulate_run(c, 0));
}
BENCHMARK(BM_SimulateRun)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
