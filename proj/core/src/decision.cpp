#include "twoit/decision.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "twoit/errors.hpp"
#include "twoit/special_functions.hpp"

namespace twoit {

namespace {

bool cri_inside(const PosteriorSummary& s, const IntervalHypothesis& h) {
    return h.lower <= s.cri_lower && s.cri_upper <= h.upper;
}

// CrI entirely outside H_P's interior, i.e. inside the complement hypothesis.
bool cri_inside_complement(const PosteriorSummary& s, const IntervalHypothesis& h_p) {
    return s.cri_upper <= h_p.lower || s.cri_lower >= h_p.upper;
}

}  // namespace

Verdict evaluate(const PosteriorSummary& summary, const HypothesisPair& pair) {
    if (summary.scale != pair.scale())
        throw ValidationError("evaluate: summary and pair are on different scales");

    Verdict v;
    v.mass_hp = summary.mass_hp;
    v.mass_ha = summary.mass_ha;
    v.cri_length = summary.cri_length();
    v.rule_used = pair.rule;
    v.posterior_ratio = posterior_ratio(summary);
    v.ratio_is_infinite = std::isinf(v.posterior_ratio);
    v.trend = summary.mass_hp > 0.5 * pair.pi && summary.mass_hp < pair.pi;

    bool accept_hp = false;
    bool accept_ha = false;
    if (pair.rule == DecisionRule::ProbabilityThreshold) {
        accept_hp = summary.mass_hp >= pair.pi;
        accept_ha = summary.mass_ha >= pair.pi;
    } else {
        accept_hp = cri_inside(summary, pair.h_p);
        accept_ha = pair.ha_complement ? cri_inside_complement(summary, pair.h_p)
                                       : cri_inside(summary, pair.h_a);
    }

    if (accept_hp && accept_ha) {
        v.outcome = Outcome::AmbiguousOverlap;
        return v;
    }
    if (accept_hp) {
        v.outcome = Outcome::AcceptHP;
        return v;
    }
    if (accept_ha) {
        v.outcome = Outcome::AcceptHA;
        return v;
    }

    const double len_p = pair.h_p.length();
    const double len_a =
        pair.ha_complement ? std::numeric_limits<double>::infinity() : pair.h_a.length();
    const bool shorter_p = v.cri_length < len_p;
    const bool shorter_a = v.cri_length < len_a;
    const bool outside_both =
        !cri_inside(summary, pair.h_p) &&
        !(pair.ha_complement ? cri_inside_complement(summary, pair.h_p)
                             : cri_inside(summary, pair.h_a));
    const bool below_pi = summary.mass_hp < pair.pi && summary.mass_ha < pair.pi;
    if ((shorter_p || shorter_a) && outside_both && below_pi) {
        v.outcome = Outcome::Serendipity;
        if (shorter_p != shorter_a)
            v.notes.emplace_back(
                "serendipity: credible interval is shorter than only one hypothesis interval");
    } else {
        v.outcome = Outcome::InsufficientPower;
    }
    return v;
}

double posterior_ratio(const PosteriorSummary& summary) {
    if (summary.mass_ha == 0.0) return std::numeric_limits<double>::infinity();
    return summary.mass_hp / summary.mass_ha;
}

double bayes_factor(double prior_mass_hp, double prior_mass_ha, const PosteriorSummary& summary) {
    if (!(prior_mass_hp > 0.0) || !(prior_mass_ha > 0.0))
        throw ValidationError("bayes_factor: undefined for zero prior interval mass");
    if (prior_mass_hp > 1.0 || prior_mass_ha > 1.0)
        throw ValidationError("bayes_factor: prior masses must lie in (0, 1]");
    const double prior_odds = prior_mass_hp / prior_mass_ha;
    if (summary.mass_ha == 0.0) return std::numeric_limits<double>::infinity();
    return (summary.mass_hp / summary.mass_ha) / prior_odds;
}

namespace {

PriorMass pair_mass_from(const HypothesisPair& pair,
                         const std::function<double(const IntervalHypothesis&)>& mass) {
    PriorMass m;
    m.mass_hp = mass(pair.h_p);
    m.mass_ha = pair.ha_complement ? 1.0 - m.mass_hp : mass(pair.h_a);
    return m;
}

PriorMass mc_pair_mass(const HypothesisPair& pair, long draws,
                       const std::function<double()>& draw) {
    long in_hp = 0;
    long in_ha = 0;
    for (long i = 0; i < draws; ++i) {
        const double v = draw();
        if (pair.h_p.contains(v)) ++in_hp;
        if (!pair.ha_complement && pair.h_a.contains(v)) ++in_ha;
    }
    PriorMass m;
    m.mass_hp = static_cast<double>(in_hp) / static_cast<double>(draws);
    m.mass_ha = pair.ha_complement ? static_cast<double>(draws - in_hp) / static_cast<double>(draws)
                                   : static_cast<double>(in_ha) / static_cast<double>(draws);
    m.method = SummaryMethod::MonteCarlo;
    m.draws = draws;
    return m;
}

}  // namespace

PriorMass prior_interval_mass(const PriorSpec& prior, const HypothesisPair& pair, long draws,
                              RandomStream& stream) {
    return std::visit(
        [&](const auto& p) -> PriorMass {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BetaPrior>) {
                if (!(p.a > 0.0) || !(p.b > 0.0))
                    throw ValidationError("prior_interval_mass: improper beta prior");
                BetaPosterior as_posterior{p.a, p.b};
                return pair_mass_from(pair, [&](const IntervalHypothesis& h) {
                    return beta_interval_mass(as_posterior, h.lower, h.upper);
                });
            } else if constexpr (std::is_same_v<T, NormalPrior>) {
                if (!(p.kappa0 > 0.0) || !(p.nu0 > 0.0) || !(p.sigma02 > 0.0))
                    throw ValidationError("prior_interval_mass: improper normal-mean prior");
                // Prior marginal of the mean: t_{nu0}(mu0, sqrt(sigma02/kappa0)).
                NormalMeanPosterior as_posterior{p.mu0, p.kappa0, p.nu0, p.sigma02};
                return pair_mass_from(pair, [&](const IntervalHypothesis& h) {
                    return mean_interval_mass(as_posterior, h.lower, h.upper);
                });
            } else if constexpr (std::is_same_v<T, LogNormalRatioPrior>) {
                if (!(p.sd_log > 0.0))
                    throw ValidationError("prior_interval_mass: improper log-ratio prior");
                return pair_mass_from(pair, [&](const IntervalHypothesis& h) {
                    return normal_cdf(std::log(h.upper) / p.sd_log) -
                           normal_cdf(std::log(h.lower) / p.sd_log);
                });
            } else if constexpr (std::is_same_v<T, TwoPropDiffPrior>) {
                if (!(p.group1.a > 0.0) || !(p.group1.b > 0.0) || !(p.group2.a > 0.0) ||
                    !(p.group2.b > 0.0))
                    throw ValidationError("prior_interval_mass: improper beta prior");
                if (draws < kMinDraws)
                    throw ValidationError("prior_interval_mass: too few draws");
                return mc_pair_mass(pair, draws, [&]() {
                    return sample_beta(p.group1.a, p.group1.b, stream) -
                           sample_beta(p.group2.a, p.group2.b, stream);
                });
            } else if constexpr (std::is_same_v<T, TwoPropRatioPrior>) {
                if (!(p.group1.a > 0.0) || !(p.group1.b > 0.0) || !(p.group2.a > 0.0) ||
                    !(p.group2.b > 0.0))
                    throw ValidationError("prior_interval_mass: improper beta prior");
                if (draws < kMinDraws)
                    throw ValidationError("prior_interval_mass: too few draws");
                return mc_pair_mass(pair, draws, [&]() {
                    const double p1 =
                        std::clamp(sample_beta(p.group1.a, p.group1.b, stream), 1e-300, 1.0 - 1e-16);
                    const double p2 =
                        std::clamp(sample_beta(p.group2.a, p.group2.b, stream), 1e-300, 1.0 - 1e-16);
                    return p.measure == RatioMeasure::RelativeRisk
                               ? p1 / p2
                               : (p1 / (1.0 - p1)) / (p2 / (1.0 - p2));
                });
            } else {
                static_assert(std::is_same_v<T, MeanDiffPrior>);
                for (const NormalPrior* g : {&p.group1, &p.group2})
                    if (!(g->kappa0 > 0.0) || !(g->nu0 > 0.0) || !(g->sigma02 > 0.0))
                        throw ValidationError("prior_interval_mass: improper normal-mean prior");
                if (draws < kMinDraws)
                    throw ValidationError("prior_interval_mass: too few draws");
                return mc_pair_mass(pair, draws, [&]() {
                    const double v1 = sample_scaled_inv_chi2(p.group1.nu0, p.group1.sigma02, stream);
                    const double m1 =
                        sample_normal(p.group1.mu0, std::sqrt(v1 / p.group1.kappa0), stream);
                    const double v2 = sample_scaled_inv_chi2(p.group2.nu0, p.group2.sigma02, stream);
                    const double m2 =
                        sample_normal(p.group2.mu0, std::sqrt(v2 / p.group2.kappa0), stream);
                    return m1 - m2;
                });
            }
        },
        prior);
}

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::AcceptHP: return "accept-hp";
        case Outcome::AcceptHA: return "accept-ha";
        case Outcome::Serendipity: return "serendipity";
        case Outcome::InsufficientPower: return "insufficient-power";
        case Outcome::AmbiguousOverlap: return "ambiguous-overlap";
    }
    return "unknown";
}

}  // namespace twoit
