// benchmarks/bench_core.cpp
//
// Microbenchmarks for the evaluation hot path (decode + surrogate), the PPO
// update, and the statistics backend.

#include <benchmark/benchmark.h>

#include "lpopt/instances.hpp"
#include "lpopt/ppo.hpp"
#include "lpopt/rng.hpp"
#include "lpopt/stats.hpp"
#include "lpopt/surrogate.hpp"

namespace {

lpopt::DecisionVector random_vector(const lpopt::ProblemInstance& inst, lpopt::Rng& rng) {
    lpopt::DecisionVector v(static_cast<std::size_t>(inst.dim()));
    for (int k = 0; k < inst.dim(); ++k) v[k] = rng.uniform_int(0, inst.cardinality(k) - 1);
    return v;
}

void BM_DecodeEvaluate(benchmark::State& state) {
    const lpopt::ProblemInstance inst = lpopt::builtin_instance("89-eighth");
    const lpopt::LoadingPatternObjective obj(inst);
    lpopt::Rng rng(1);
    std::vector<lpopt::DecisionVector> pool;
    for (int i = 0; i < 256; ++i) pool.push_back(random_vector(inst, rng));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(obj.evaluate(pool[i % pool.size()]));
        ++i;
    }
}
BENCHMARK(BM_DecodeEvaluate);

void BM_DecodeOnly(benchmark::State& state) {
    const lpopt::ProblemInstance inst = lpopt::builtin_instance("89-eighth");
    lpopt::Rng rng(2);
    const lpopt::DecisionVector v = random_vector(inst, rng);
    for (auto _ : state) benchmark::DoNotOptimize(lpopt::decode(v, inst));
}
BENCHMARK(BM_DecodeOnly);

void BM_PpoUpdate(benchmark::State& state) {
    const lpopt::ProblemInstance inst = lpopt::builtin_instance("89-eighth");
    const lpopt::LoadingPatternObjective obj(inst);
    lpopt::PolicyParams params = lpopt::PolicyParams::zeros(obj);
    lpopt::AdamState adam = lpopt::AdamState::zeros_like(params);
    lpopt::PpoConfig cfg;
    cfg.minibatch = 64;
    lpopt::Rng rng(3);
    lpopt::TrajectoryBatch batch;
    for (int i = 0; i < 256; ++i) {
        auto [action, logprobs] = lpopt::sample_action(params, rng);
        batch.samples.push_back({std::move(action), std::move(logprobs), rng.uniform(-100.0, 0.0)});
    }
    lpopt::Rng urng(4);
    for (auto _ : state) lpopt::update(params, batch, cfg, adam, urng);
}
BENCHMARK(BM_PpoUpdate);

void BM_StudentizedRange(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lpopt::stats::studentized_range_sf(3.2, 5));
}
BENCHMARK(BM_StudentizedRange);

}  // namespace

BENCHMARK_MAIN();
