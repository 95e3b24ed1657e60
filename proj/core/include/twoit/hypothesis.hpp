#pragma once

#include <string>

namespace twoit {

enum class HypothesisLabel { Present, Absent };

// Scale the interval bounds live on. Ratio-type parameters (RR, OR) use
// Log: bounds are stored in ratio units but the interval is meant to be
// symmetric on the log scale.
enum class Scale { Natural, Log };

enum class DecisionRule { ProbabilityThreshold, CrIInclusion };

// One closed interval [lower, upper] of parameter values.
struct IntervalHypothesis {
    HypothesisLabel label = HypothesisLabel::Present;
    double lower = 0.0;
    double upper = 0.0;
    Scale scale = Scale::Natural;

    double length() const { return upper - lower; }
    bool contains(double value) const { return lower <= value && value <= upper; }
};

// Validated hypothesis pair: the "effect present" interval H_P, the
// "effect absent" interval H_A, the acceptance threshold pi and the
// decision rule. When ha_complement is set, H_A is the complement of
// H_P's interior (an equivalence test with |theta| >= bound as the
// absence hypothesis); h_a then only mirrors h_p's bounds and L_A is
// treated as infinite.
struct HypothesisPair {
    IntervalHypothesis h_p;
    IntervalHypothesis h_a;
    double pi = 0.95;
    DecisionRule rule = DecisionRule::ProbabilityThreshold;
    double cri_level = 0.95;
    bool disjoint = false;       // derived at construction
    bool ha_complement = false;  // H_A = complement of H_P

    Scale scale() const { return h_p.scale; }
};

IntervalHypothesis make_hypothesis(HypothesisLabel label, double lower, double upper,
                                   Scale scale = Scale::Natural);

// Validates and derives the disjoint flag. Throws ValidationError when
// pi <= 0.5, an interval is inverted, or the scales are mixed.
HypothesisPair make_pair(const IntervalHypothesis& h_p, const IntervalHypothesis& h_a,
                         double pi, DecisionRule rule = DecisionRule::ProbabilityThreshold,
                         double cri_level = 0.95);

// Pair in which H_A is the complement of H_P (equivalence against
// "effect at least as large as the bound").
HypothesisPair complement_pair(const IntervalHypothesis& h_p, double pi,
                               DecisionRule rule = DecisionRule::ProbabilityThreshold,
                               double cri_level = 0.95);

// Log-scale pair around a target ratio t != 1:
//   H_P = [exp(log t / 2), exp(3 log t / 2)],  H_A = [exp(-log t / 2), exp(log t / 2)]
// (bounds ordered). Symmetric about t and about 1 on the log scale.
HypothesisPair ratio_pair_from_target(double target_ratio, double pi = 0.95,
                                      DecisionRule rule = DecisionRule::ProbabilityThreshold,
                                      double cri_level = 0.95);

// Natural-scale pair of equal-width intervals centred on center_a / center_p.
HypothesisPair symmetric_pair(double center_a, double center_p, double width, double pi,
                              DecisionRule rule, double cri_level = 0.95);

const char* to_string(HypothesisLabel label);
const char* to_string(Scale scale);
const char* to_string(DecisionRule rule);

}  // namespace twoit
