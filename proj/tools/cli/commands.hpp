#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/serialization.hpp"
#include "twoit/decision.hpp"
#include "twoit/hypothesis.hpp"
#include "twoit/posterior.hpp"

namespace twoit::cli {

// Pair description as it arrives from flags. Either explicit --hp/--ha
// bounds, --hp plus --ha-complement, or --target for the log-scale recipe.
struct PairOptions {
    std::vector<double> hp;  // two bounds
    std::vector<double> ha;  // two bounds
    bool ha_complement = false;
    std::optional<double> target;
    double pi = 0.95;
    std::string rule = "probability-threshold";
    double cri_level = 0.95;
};

HypothesisPair build_pair(const PairOptions& options, Scale scale);

BetaPrior parse_beta_prior_option(const std::string& value);

// Result documents for the test-* commands. Whatever the verdict, these
// return normally; errors surface as exceptions mapped to exit codes by the
// caller. Monte Carlo commands use stream 0 for the posterior and stream 1
// for prior interval masses.
json run_test_prop(long x, long n, BetaPrior prior, const HypothesisPair& pair);
json run_test_two_prop(long x1, long n1, long x2, long n2, BetaPrior prior,
                       const HypothesisPair& pair, long draws, std::uint64_t seed);
json run_test_ratio(long x1, long n1, long x2, long n2, RatioMeasure measure, BetaPrior prior,
                    const HypothesisPair& pair, long draws, std::uint64_t seed);
json run_test_mean(const SampleStats& stats, const NormalPrior& prior, const HypothesisPair& pair);
json run_test_mean_diff(const SampleStats& stats1, const SampleStats& stats2,
                        const NormalPrior& prior1, const NormalPrior& prior2,
                        const HypothesisPair& pair, long draws, std::uint64_t seed);
json run_test_summary_ratio(double point_estimate, double ci_lower, double ci_upper,
                            double ci_level, double prior_sd_log, const HypothesisPair& pair);

}  // namespace twoit::cli
