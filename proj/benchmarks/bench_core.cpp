#include <benchmark/benchmark.h>

#include "twoit/posterior.hpp"
#include "twoit/random.hpp"
#include "twoit/simulation.hpp"
#include "twoit/special_functions.hpp"

namespace {

using namespace twoit;

void BM_RegIncBeta(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reg_inc_beta(x, 80.0, 360.0));
        x += 1e-7;
    }
}
BENCHMARK(BM_RegIncBeta);

void BM_BetaQuantile(benchmark::State& state) {
    double p = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_quantile(p, 80.0, 360.0));
        p += 1e-7;
    }
}
BENCHMARK(BM_BetaQuantile);

void BM_SampleBeta(benchmark::State& state) {
    RandomStream stream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_beta(80.0, 360.0, stream));
}
BENCHMARK(BM_SampleBeta);

void BM_SampleNormal(benchmark::State& state) {
    RandomStream stream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_normal(0.0, 1.0, stream));
}
BENCHMARK(BM_SampleNormal);

void BM_TwoPropDiffPosterior(benchmark::State& state) {
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 0.1, 0.3),
                                make_hypothesis(HypothesisLabel::Absent, -0.1, 0.1), 0.95);
    RandomStream stream(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            two_prop_diff_posterior(560, 800, 400, 800, BetaPrior{0.5, 0.5}, pair,
                                    state.range(0), stream));
    }
}
BENCHMARK(BM_TwoPropDiffPosterior)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ExactOnePropCell(benchmark::State& state) {
    ScenarioGrid grid;
    grid.situation = Situation::OneProp;
    grid.scenario_id = "bench";
    grid.truth_a = 0.5;
    grid.truth_p = 0.7;
    grid.width = 0.2;
    grid.rule = DecisionRule::CrIInclusion;
    grid.n_grid = {static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(exact_one_prop_oc(grid, 1));
}
BENCHMARK(BM_ExactOnePropCell)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MeanSummary(benchmark::State& state) {
    const auto pair = symmetric_pair(0.0, 1.0, 1.0, 0.95, DecisionRule::CrIInclusion);
    const auto post = mean_posterior(make_sample_stats(400, 0.02, 8.9),
                                     NormalPrior{0.0, 1.0, 1.0, 9.0});
    for (auto _ : state) benchmark::DoNotOptimize(mean_summary(post, pair));
}
BENCHMARK(BM_MeanSummary);

}  // namespace

BENCHMARK_MAIN();
