#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twoit/decision.hpp"
#include "twoit/hypothesis.hpp"
#include "twoit/posterior.hpp"

namespace twoit {

enum class Situation { OneProp, TwoProp, Mean };
enum class TruthLabel { HA, HP };

// One operating-characteristics sweep: the truth values under each
// hypothesis, the pair recipe (equal-width intervals centred on the
// truths), the sample-size grid and the replication budget.
struct ScenarioGrid {
    Situation situation = Situation::OneProp;
    std::string scenario_id;
    double truth_a = 0.0;  // theta under H_A (proportion, delta, or mean)
    double truth_p = 0.0;  // theta under H_P
    double baseline = 0.5;  // TwoProp: group-2 proportion; group 1 is baseline + delta
    double width = 0.2;
    double pi = 0.95;
    DecisionRule rule = DecisionRule::ProbabilityThreshold;
    double cri_level = 0.95;
    std::vector<int> n_grid;
    int n_sims = 2000;       // replications per cell (Monte Carlo situations)
    long mc_draws = 100000;  // posterior draws per replication (TwoProp)
    double data_sd = 3.0;    // Mean only
    BetaPrior beta_prior;    // OneProp / TwoProp
    NormalPrior prior_a;     // Mean: prior used when H_A is true
    NormalPrior prior_p;     // Mean: prior used when H_P is true
    std::uint64_t seed = 0;
};

// Derives the grid's hypothesis pair (equal widths centred on the truths).
HypothesisPair grid_pair(const ScenarioGrid& grid, DecisionRule rule);

// One (n, truth) cell of an OC sweep.
struct OCCell {
    std::string scenario_id;
    DecisionRule rule = DecisionRule::ProbabilityThreshold;
    int n = 0;
    TruthLabel truth = TruthLabel::HA;
    double p_accept_hp = 0.0;
    double p_accept_ha = 0.0;
    double p_serendipity = 0.0;
    double p_insufficient = 0.0;
    SummaryMethod method = SummaryMethod::Exact;
    long n_sims = 0;  // 0 for exact cells
    std::uint64_t seed = 0;
};

// The four conditional acceptance probabilities at one sample size,
// joining the HA-truth and HP-truth cells.
struct OCPoint {
    int n = 0;
    double p_hp_given_hp = 0.0;
    double p_ha_given_hp = 0.0;
    double p_hp_given_ha = 0.0;
    double p_ha_given_ha = 0.0;
    SummaryMethod method = SummaryMethod::Exact;
};

std::vector<OCPoint> to_oc_points(const std::vector<OCCell>& cells, DecisionRule rule);

// Per-replication record for the selection-bias tables. "accepted" means
// the verdict accepted the hypothesis that generated the data.
struct BiasRecord {
    int n = 0;
    TruthLabel truth = TruthLabel::HA;
    bool accepted = false;
    double sample_mean = 0.0;
    double sample_sd = 0.0;
};

// One row of the bias table: empirical quantiles of the sample mean and
// sample sd over a (n, truth, accepted) group.
struct BiasRow {
    int n = 0;
    TruthLabel truth = TruthLabel::HA;
    bool accepted = false;
    long count = 0;
    std::array<double, 3> mean_q{};  // at probs[0..2]
    std::array<double, 3> sd_q{};
};

struct BiasTable {
    std::array<double, 3> probs{0.025, 0.5, 0.975};
    std::vector<BiasRow> rows;
    std::vector<std::string> warnings;  // groups omitted because they were empty
};

// Exact one-proportion operating characteristics: acceptance probabilities
// are binomial-pmf-weighted sums over all datasets, no sampling noise.
// Emits each cell under both decision rules so the curves can be compared;
// cell scenario ids get a "/cri" or "/prob" suffix.
// Throws ValidationError when an n exceeds the 10^6 resource guard.
std::vector<OCCell> exact_one_prop_oc(const ScenarioGrid& grid, int workers = 0);

// Two-proportion OC by simulation: each replication draws binomial data
// under the truth, runs the Monte Carlo difference posterior and tallies
// the verdict. Replication k of cell c uses stream_id = c * 2^20 + k, so
// results are identical for any worker count.
std::vector<OCCell> mc_two_prop_oc(const ScenarioGrid& grid, int workers = 0);

struct MeanOcResult {
    std::vector<OCCell> cells;
    std::vector<BiasRecord> records;
};

// Mean-vs-reference OC by simulation, also collecting the per-replication
// sample statistics for the bias tables.
MeanOcResult mc_mean_oc(const ScenarioGrid& grid, int workers = 0);

BiasTable bias_quantiles(const std::vector<BiasRecord>& records,
                         std::array<double, 3> probs = {0.025, 0.5, 0.975});

// Sarle's bimodality coefficient (skewness^2 + 1 over adjusted kurtosis).
// Values above the uniform-distribution reference 5/9 suggest more than
// one mode. Used as the qualitative check that rejected-sample means pile
// up on both sides of the truth.
double bimodality_coefficient(const std::vector<double>& values);
inline constexpr double kBimodalityThreshold = 5.0 / 9.0;

// CSV emission. Columns are part of the external interface:
//   oc.csv:   situation,scenario_id,n,truth,p_accept_hp,p_accept_ha,
//             p_serendipity,p_insufficient,method,n_sims,seed
//   bias.csv: n,truth,accepted,count,mean_q025,mean_q50,mean_q975,
//             sd_q025,sd_q50,sd_q975
void write_oc_csv(std::ostream& out, Situation situation, const std::vector<OCCell>& cells);
void write_bias_csv(std::ostream& out, const BiasTable& table);

const char* to_string(Situation situation);
const char* to_string(TruthLabel truth);

}  // namespace twoit
