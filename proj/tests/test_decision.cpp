#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "twoit/decision.hpp"
#include "twoit/errors.hpp"
#include "twoit/special_functions.hpp"

using namespace twoit;

namespace {

PosteriorSummary make_summary(double mass_hp, double mass_ha, double cri_lo, double cri_hi,
                              Scale scale = Scale::Natural) {
    PosteriorSummary s;
    s.point = 0.5 * (cri_lo + cri_hi);
    s.cri_lower = cri_lo;
    s.cri_upper = cri_hi;
    s.mass_hp = mass_hp;
    s.mass_ha = mass_ha;
    s.scale = scale;
    return s;
}

HypothesisPair unit_pair(DecisionRule rule = DecisionRule::ProbabilityThreshold) {
    return make_pair(make_hypothesis(HypothesisLabel::Present, 0.5, 1.5),
                     make_hypothesis(HypothesisLabel::Absent, -0.5, 0.5), 0.95, rule);
}

}  // namespace

TEST_CASE("evaluate accepts on the probability threshold") {
    const auto v = evaluate(make_summary(0.995, 0.004, 0.6, 1.2), unit_pair());
    CHECK(v.outcome == Outcome::AcceptHP);
    CHECK_FALSE(v.trend);
    const auto v2 = evaluate(make_summary(0.004, 0.995, -0.2, 0.3), unit_pair());
    CHECK(v2.outcome == Outcome::AcceptHA);
}

TEST_CASE("evaluate forces serendipity and insufficient power") {
    // Narrow CrI entirely outside both unit intervals.
    const auto serendipity = evaluate(make_summary(0.01, 0.01, 2.1, 2.4), unit_pair());
    CHECK(serendipity.outcome == Outcome::Serendipity);
    // Wide CrI: longer than both intervals.
    const auto weak = evaluate(make_summary(0.4, 0.4, -1.0, 1.5), unit_pair());
    CHECK(weak.outcome == Outcome::InsufficientPower);
    CHECK(weak.cri_length == doctest::Approx(2.5));
}

TEST_CASE("evaluate under credible-interval inclusion") {
    const auto pair = unit_pair(DecisionRule::CrIInclusion);
    CHECK(evaluate(make_summary(0.99, 0.0, 0.55, 1.45), pair).outcome == Outcome::AcceptHP);
    CHECK(evaluate(make_summary(0.2, 0.6, -0.4, 0.5), pair).outcome == Outcome::AcceptHA);
    // Bound-touching intervals count as contained.
    CHECK(evaluate(make_summary(0.99, 0.0, 0.5, 1.5), pair).outcome == Outcome::AcceptHP);
    // Straddling CrI, masses below pi, CrI shorter than the intervals.
    CHECK(evaluate(make_summary(0.5, 0.45, 0.4, 0.6), pair).outcome == Outcome::Serendipity);
}

TEST_CASE("evaluate flags a trend and single-length serendipity") {
    const auto trendy = evaluate(make_summary(0.6, 0.2, 0.4, 2.0), unit_pair());
    CHECK(trendy.trend);
    // Asymmetric pair: L_P = 1, L_A = 3.
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 0.5, 1.5),
                                make_hypothesis(HypothesisLabel::Absent, -3.5, -0.5), 0.95);
    const auto v = evaluate(make_summary(0.1, 0.1, 2.0, 4.0), pair);
    CHECK(v.outcome == Outcome::Serendipity);  // length 2 < L_A only
    REQUIRE(v.notes.size() == 1);
    CHECK(v.notes[0].find("shorter than only one") != std::string::npos);
}

TEST_CASE("evaluate on complement pairs") {
    const auto pair = complement_pair(make_hypothesis(HypothesisLabel::Present, -5.0, 5.0), 0.95,
                                      DecisionRule::CrIInclusion);
    CHECK(evaluate(make_summary(0.99, 0.01, -3.0, 3.0), pair).outcome == Outcome::AcceptHP);
    CHECK(evaluate(make_summary(0.01, 0.99, 6.0, 9.0), pair).outcome == Outcome::AcceptHA);
    // Straddling a boundary of H_P with a short CrI: L_A is infinite, so the
    // length condition holds; not contained in either side.
    CHECK(evaluate(make_summary(0.5, 0.5, 4.0, 6.0), pair).outcome == Outcome::Serendipity);
}

TEST_CASE("evaluate validates the scale") {
    CHECK_THROWS_AS(evaluate(make_summary(0.9, 0.05, 0.6, 1.2, Scale::Log), unit_pair()),
                    ValidationError);
}

TEST_CASE("posterior ratio and its sentinel") {
    CHECK(posterior_ratio(make_summary(0.849, 0.028, 0.0, 1.0)) ==
          doctest::Approx(30.32).epsilon(0.01));
    CHECK(posterior_ratio(make_summary(0.4, 0.4, 0.0, 1.0)) == doctest::Approx(1.0));
    const auto v = evaluate(make_summary(0.9, 0.0, 0.6, 1.2), unit_pair());
    CHECK(std::isinf(v.posterior_ratio));
    CHECK(v.ratio_is_infinite);
}

TEST_CASE("bayes factor definition and errors") {
    const auto s = make_summary(0.849, 0.028, 0.0, 1.0);
    // Prior odds equal to posterior odds: no information.
    CHECK(bayes_factor(0.849, 0.028, s) == doctest::Approx(1.0).epsilon(1e-12));
    // Prior odds of one.
    CHECK(bayes_factor(0.3, 0.3, s) == doctest::Approx(0.849 / 0.028).epsilon(1e-12));
    CHECK_THROWS_AS(bayes_factor(0.0, 0.3, s), ValidationError);
    CHECK_THROWS_AS(bayes_factor(0.3, 0.0, s), ValidationError);
}

TEST_CASE("prior interval masses: closed forms") {
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 0.6, 0.8),
                                make_hypothesis(HypothesisLabel::Absent, 0.4, 0.6), 0.95);
    RandomStream stream(61, 0);
    const auto uniform = prior_interval_mass(BetaPrior{1.0, 1.0}, pair, 0, stream);
    CHECK(uniform.mass_ha == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(uniform.method == SummaryMethod::Exact);

    const auto half = make_pair(make_hypothesis(HypothesisLabel::Present, 0.5, 1.0),
                                make_hypothesis(HypothesisLabel::Absent, 0.0, 0.5), 0.95);
    const auto jeffreys = prior_interval_mass(BetaPrior{0.5, 0.5}, half, 0, stream);
    CHECK(jeffreys.mass_ha == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(prior_interval_mass(BetaPrior{0.0, 1.0}, pair, 0, stream), ValidationError);
}

TEST_CASE("prior interval masses: log-scale normal prior") {
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 1.1, 2.95, Scale::Log),
                                make_hypothesis(HypothesisLabel::Absent, 0.9, 1.1, Scale::Log),
                                0.95);
    const double sd = std::log(20.0) / 1.96;
    RandomStream stream(62, 0);
    const auto mass = prior_interval_mass(LogNormalRatioPrior{sd}, pair, 0, stream);
    // Frozen against the quadrature normal CDF.
    CHECK(mass.mass_ha == doctest::Approx(0.052339903514648).epsilon(1e-9));
    const double quad = oracle::normal_cdf(std::log(1.1) / sd) - oracle::normal_cdf(std::log(0.9) / sd);
    CHECK(std::fabs(mass.mass_ha - quad) < 1e-9);
    CHECK(mass.mass_hp == doctest::Approx(0.235599859035455).epsilon(1e-9));
}

TEST_CASE("prior interval masses: normal-mean prior uses the t marginal") {
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 0.5, 1.5),
                                make_hypothesis(HypothesisLabel::Absent, -0.5, 0.5), 0.95);
    RandomStream stream(63, 0);
    const NormalPrior prior{0.0, 1.0, 1.0, 9.0};
    const auto mass = prior_interval_mass(prior, pair, 0, stream);
    const double scale = std::sqrt(9.0 / 1.0);
    const double expected =
        student_t_cdf(0.5 / scale, 1.0) - student_t_cdf(-0.5 / scale, 1.0);
    CHECK(mass.mass_ha == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(prior_interval_mass(NormalPrior{0.0, 0.0, 1.0, 9.0}, pair, 0, stream),
                    ValidationError);
}

TEST_CASE("prior interval masses: Monte Carlo ratio prior matches the closed form") {
    // For independent uniforms the ratio density is 1/2 on (0,1] and
    // 1/(2 t^2) beyond, so interval masses have closed forms.
    const auto pair = ratio_pair_from_target(1.7);
    RandomStream stream(64, 0);
    const auto mass = prior_interval_mass(TwoPropRatioPrior{{1.0, 1.0}, {1.0, 1.0},
                                                            RatioMeasure::RelativeRisk},
                                          pair, 400000, stream);
    CHECK(mass.method == SummaryMethod::MonteCarlo);
    CHECK(mass.mass_hp == doctest::Approx(0.157904556527400).epsilon(0.02));
    CHECK(mass.mass_ha == doctest::Approx(0.233035011152630).epsilon(0.02));
}

TEST_CASE("bayes factor for the relative-risk analysis") {
    // Posterior masses from the published analysis over the prior odds of
    // the uniform ratio prior.
    const auto s = make_summary(0.849, 0.028, 0.3, 2.0, Scale::Log);
    const double prior_odds = 0.157904556527400 / 0.233035011152630;
    const double bf = bayes_factor(0.157904556527400, 0.233035011152630, s);
    CHECK(bf == doctest::Approx((0.849 / 0.028) / prior_odds).epsilon(1e-12));
    CHECK(bf == doctest::Approx(44.75).epsilon(0.01));
}

TEST_CASE("decision logic is exhaustive and unambiguous for disjoint pairs") {
    RandomStream stream(65, 0);
    for (int i = 0; i < 2000; ++i) {
        const double gap = stream.uniform();
        const double len_a = 0.05 + stream.uniform();
        const double len_p = 0.05 + stream.uniform();
        const auto pair = make_pair(
            make_hypothesis(HypothesisLabel::Present, gap, gap + len_p),
            make_hypothesis(HypothesisLabel::Absent, -len_a - gap, -gap),
            0.51 + 0.48 * stream.uniform(),
            stream.uniform() < 0.5 ? DecisionRule::ProbabilityThreshold
                                   : DecisionRule::CrIInclusion);
        const double mass_hp = stream.uniform();
        const double mass_ha = stream.uniform() * (1.0 - mass_hp);
        const double lo = -2.0 + 4.0 * stream.uniform();
        const auto summary = make_summary(mass_hp, mass_ha, lo, lo + 2.0 * stream.uniform());
        const auto v = evaluate(summary, pair);
        CHECK(v.outcome != Outcome::AmbiguousOverlap);
        // Deterministic: the same inputs give the same outcome.
        CHECK(evaluate(summary, pair).outcome == v.outcome);
    }
}

TEST_CASE("accepting H_P is monotone in its mass under the threshold rule") {
    const auto pair = unit_pair();
    bool accepted = false;
    for (double mass = 0.0; mass <= 1.0; mass += 0.01) {
        const auto v = evaluate(make_summary(mass, 0.0, 0.6, 1.2), pair);
        const bool now = v.outcome == Outcome::AcceptHP;
        if (accepted) CHECK(now);
        accepted = now;
    }
    CHECK(accepted);
}
