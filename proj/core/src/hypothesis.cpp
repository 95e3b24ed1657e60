#include "twoit/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "twoit/errors.hpp"

namespace twoit {

IntervalHypothesis make_hypothesis(HypothesisLabel label, double lower, double upper,
                                   Scale scale) {
    if (!std::isfinite(lower) || !std::isfinite(upper))
        throw ValidationError("interval bounds must be finite");
    if (!(lower < upper))
        throw ValidationError("interval lower bound must be strictly below the upper bound");
    if (scale == Scale::Log && !(lower > 0.0))
        throw ValidationError("log-scale interval bounds must be positive");
    return IntervalHypothesis{label, lower, upper, scale};
}

HypothesisPair make_pair(const IntervalHypothesis& h_p, const IntervalHypothesis& h_a,
                         double pi, DecisionRule rule, double cri_level) {
    // Re-validate: the intervals may have been built by hand.
    IntervalHypothesis p = make_hypothesis(HypothesisLabel::Present, h_p.lower, h_p.upper, h_p.scale);
    IntervalHypothesis a = make_hypothesis(HypothesisLabel::Absent, h_a.lower, h_a.upper, h_a.scale);
    if (p.scale != a.scale) throw ValidationError("H_P and H_A must share a scale");
    if (!(pi > 0.5)) throw ValidationError("pi must exceed 0.5");
    if (!(pi < 1.0)) throw ValidationError("pi must be below 1");
    if (!(cri_level > 0.0) || !(cri_level < 1.0))
        throw ValidationError("cri_level must lie in (0, 1)");
    HypothesisPair pair;
    pair.h_p = p;
    pair.h_a = a;
    pair.pi = pi;
    pair.rule = rule;
    pair.cri_level = cri_level;
    // Touching at a single boundary point still counts as disjoint.
    pair.disjoint = (a.upper <= p.lower) || (p.upper <= a.lower);
    return pair;
}

HypothesisPair complement_pair(const IntervalHypothesis& h_p, double pi, DecisionRule rule,
                               double cri_level) {
    IntervalHypothesis a = h_p;
    a.label = HypothesisLabel::Absent;
    HypothesisPair pair = make_pair(h_p, a, pi, rule, cri_level);
    pair.ha_complement = true;
    pair.disjoint = true;
    return pair;
}

HypothesisPair ratio_pair_from_target(double target_ratio, double pi, DecisionRule rule,
                                      double cri_level) {
    if (!(target_ratio > 0.0)) throw ValidationError("target ratio must be positive");
    if (target_ratio == 1.0) throw ValidationError("target ratio of 1 is degenerate");
    const double half = 0.5 * std::log(target_ratio);
    const double p_lo = std::exp(half);
    const double p_hi = std::exp(3.0 * half);
    const double a_lo = std::exp(-half);
    const double a_hi = std::exp(half);
    IntervalHypothesis h_p = make_hypothesis(HypothesisLabel::Present, std::min(p_lo, p_hi),
                                             std::max(p_lo, p_hi), Scale::Log);
    IntervalHypothesis h_a = make_hypothesis(HypothesisLabel::Absent, std::min(a_lo, a_hi),
                                             std::max(a_lo, a_hi), Scale::Log);
    return make_pair(h_p, h_a, pi, rule, cri_level);
}

HypothesisPair symmetric_pair(double center_a, double center_p, double width, double pi,
                              DecisionRule rule, double cri_level) {
    if (!(width > 0.0)) throw ValidationError("interval width must be positive");
    const double half = 0.5 * width;
    IntervalHypothesis h_a =
        make_hypothesis(HypothesisLabel::Absent, center_a - half, center_a + half);
    IntervalHypothesis h_p =
        make_hypothesis(HypothesisLabel::Present, center_p - half, center_p + half);
    return make_pair(h_p, h_a, pi, rule, cri_level);
}

const char* to_string(HypothesisLabel label) {
    return label == HypothesisLabel::Present ? "present" : "absent";
}

const char* to_string(Scale scale) {
    return scale == Scale::Natural ? "natural" : "log";
}

const char* to_string(DecisionRule rule) {
    return rule == DecisionRule::ProbabilityThreshold ? "probability-threshold" : "cri-inclusion";
}

}  // namespace twoit
