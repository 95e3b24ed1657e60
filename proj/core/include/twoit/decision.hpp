#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twoit/hypothesis.hpp"
#include "twoit/posterior.hpp"
#include "twoit/random.hpp"

namespace twoit {

enum class Outcome { AcceptHP, AcceptHA, Serendipity, InsufficientPower, AmbiguousOverlap };

// Decision over a posterior summary, with the diagnostics the workflow asks
// to report: the posterior ratio, the CrI length L_S, and the trend flag
// (pi/2 < Pr(H_P|D) < pi, an annotation, never an outcome).
struct Verdict {
    Outcome outcome = Outcome::InsufficientPower;
    double mass_hp = 0.0;
    double mass_ha = 0.0;
    double posterior_ratio = 0.0;  // +inf sentinel when mass_ha == 0
    bool ratio_is_infinite = false;
    std::optional<double> bayes_factor;  // filled by callers that know prior masses
    double cri_length = 0.0;             // L_S
    DecisionRule rule_used = DecisionRule::ProbabilityThreshold;
    bool trend = false;
    std::vector<std::string> notes;
};

// Four-way decision:
//  - ProbabilityThreshold: accept H_X iff its posterior mass >= pi.
//  - CrIInclusion: accept H_X iff the credible interval lies inside H_X.
//  - Neither accepted: serendipity iff L_S is shorter than L_P or L_A, the
//    CrI is contained in neither interval, and both masses are below pi;
//    otherwise insufficient power.
//  - Both accepted (possible only for overlapping intervals): ambiguous.
// Throws ValidationError when the summary and pair scales differ.
Verdict evaluate(const PosteriorSummary& summary, const HypothesisPair& pair);

// mass_hp / mass_ha; +inf when mass_ha == 0.
double posterior_ratio(const PosteriorSummary& summary);

// Posterior odds over prior odds. Throws ValidationError when a prior mass
// is zero; +inf when the posterior H_A mass is zero.
double bayes_factor(double prior_mass_hp, double prior_mass_ha, const PosteriorSummary& summary);

// Prior specifications whose interval masses the BF needs. Exact where a
// closed form exists (Beta CDF, Student-t, normal on the log scale),
// Monte Carlo for the two-group quantities.
struct LogNormalRatioPrior {
    double sd_log = 1.0;  // zero-mean normal on the log-ratio scale
};
struct TwoPropDiffPrior {
    BetaPrior group1;
    BetaPrior group2;
};
struct TwoPropRatioPrior {
    BetaPrior group1;
    BetaPrior group2;
    RatioMeasure measure = RatioMeasure::RelativeRisk;
};
struct MeanDiffPrior {
    NormalPrior group1;
    NormalPrior group2;
};

using PriorSpec = std::variant<BetaPrior, NormalPrior, LogNormalRatioPrior, TwoPropDiffPrior,
                               TwoPropRatioPrior, MeanDiffPrior>;

struct PriorMass {
    double mass_hp = 0.0;
    double mass_ha = 0.0;
    SummaryMethod method = SummaryMethod::Exact;
    long draws = 0;  // Monte Carlo only
};

// Throws ValidationError for improper priors (undefined prior mass).
PriorMass prior_interval_mass(const PriorSpec& prior, const HypothesisPair& pair, long draws,
                              RandomStream& stream);

const char* to_string(Outcome outcome);

}  // namespace twoit
