#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>

#include "twoit/errors.hpp"

namespace twoit::cli {

namespace {

struct PriorMassResult {
    std::optional<PriorMass> mass;
    std::optional<std::string> warning;
};

PriorMassResult try_prior_mass(const PriorSpec& spec, const HypothesisPair& pair, long draws,
                               std::uint64_t seed) {
    PriorMassResult result;
    try {
        RandomStream stream(seed, 1);
        result.mass = prior_interval_mass(spec, pair, draws, stream);
    } catch (const ValidationError& e) {
        result.warning = std::string("prior masses unavailable: ") + e.what();
    }
    return result;
}

// Assembles the stable result document. Field order is pinned by a golden
// test; append only.
json assemble(const char* command, json inputs, json prior, const HypothesisPair& pair,
              const PosteriorSummary& summary, const PriorMassResult& prior_mass,
              std::optional<std::uint64_t> seed, std::optional<long> draws) {
    Verdict verdict = evaluate(summary, pair);
    std::vector<std::string> warnings = summary.notes;
    std::optional<double> bf;
    if (prior_mass.mass) {
        try {
            bf = bayes_factor(prior_mass.mass->mass_hp, prior_mass.mass->mass_ha, summary);
            verdict.bayes_factor = bf;
        } catch (const ValidationError& e) {
            warnings.emplace_back(std::string("bayes factor unavailable: ") + e.what());
        }
    }
    if (prior_mass.warning) warnings.push_back(*prior_mass.warning);

    json doc;
    doc["tool"] = "twoit";
    doc["command"] = command;
    doc["inputs"] = std::move(inputs);
    doc["prior"] = std::move(prior);
    doc["pair"] = to_json(pair);
    doc["posterior"] = to_json(summary);
    doc["verdict"] = to_json(verdict);
    if (prior_mass.mass) {
        json jm;
        jm["mass_hp"] = prior_mass.mass->mass_hp;
        jm["mass_ha"] = prior_mass.mass->mass_ha;
        jm["method"] = to_string(prior_mass.mass->method);
        if (prior_mass.mass->method == SummaryMethod::MonteCarlo) {
            jm["draws"] = prior_mass.mass->draws;
            jm["stream_id"] = 1;
        }
        doc["prior_masses"] = std::move(jm);
    } else {
        doc["prior_masses"] = nullptr;
    }
    doc["bayes_factor"] = bf && std::isfinite(*bf) ? json(*bf) : json(nullptr);
    doc["warnings"] = warnings;
    doc["seed"] = seed ? json(*seed) : json(nullptr);
    doc["draws"] = draws ? json(*draws) : json(nullptr);
    return doc;
}

}  // namespace

HypothesisPair build_pair(const PairOptions& options, Scale scale) {
    const DecisionRule rule = rule_from_string(options.rule);
    if (options.target) {
        if (!options.hp.empty() || !options.ha.empty())
            throw ValidationError("--target and explicit --hp/--ha bounds are mutually exclusive");
        if (scale != Scale::Log)
            throw ValidationError("--target builds a log-scale pair; this test is on the natural scale");
        return ratio_pair_from_target(*options.target, options.pi, rule, options.cri_level);
    }
    if (options.hp.size() != 2)
        throw ValidationError("--hp needs two bounds (lower upper)");
    IntervalHypothesis h_p =
        make_hypothesis(HypothesisLabel::Present, options.hp[0], options.hp[1], scale);
    if (options.ha_complement) {
        if (!options.ha.empty())
            throw ValidationError("--ha and --ha-complement are mutually exclusive");
        return complement_pair(h_p, options.pi, rule, options.cri_level);
    }
    if (options.ha.size() != 2)
        throw ValidationError("--ha needs two bounds (lower upper), or pass --ha-complement");
    IntervalHypothesis h_a =
        make_hypothesis(HypothesisLabel::Absent, options.ha[0], options.ha[1], scale);
    return make_pair(h_p, h_a, options.pi, rule, options.cri_level);
}

BetaPrior parse_beta_prior_option(const std::string& value) {
    if (value == "jeffreys") return BetaPrior{0.5, 0.5};
    if (value == "uniform") return BetaPrior{1.0, 1.0};
    double a = 0.0, b = 0.0;
    if (std::sscanf(value.c_str(), "%lf,%lf", &a, &b) != 2)
        throw ValidationError("--prior expects jeffreys, uniform, or a,b");
    if (!(a >= 0.0) || !(b >= 0.0)) throw ValidationError("--prior parameters must be non-negative");
    return BetaPrior{a, b};
}

json run_test_prop(long x, long n, BetaPrior prior, const HypothesisPair& pair) {
    const PosteriorSummary summary = one_prop_summary(one_prop_posterior(x, n, prior), pair);
    const PriorMassResult prior_mass = try_prior_mass(prior, pair, 0, 0);
    json inputs{{"x", x}, {"n", n}};
    return assemble("test-prop", std::move(inputs), to_json(prior), pair, summary, prior_mass,
                    std::nullopt, std::nullopt);
}

json run_test_two_prop(long x1, long n1, long x2, long n2, BetaPrior prior,
                       const HypothesisPair& pair, long draws, std::uint64_t seed) {
    RandomStream stream(seed, 0);
    const PosteriorSummary summary =
        two_prop_diff_posterior(x1, n1, x2, n2, prior, pair, draws, stream);
    const PriorMassResult prior_mass =
        try_prior_mass(TwoPropDiffPrior{prior, prior}, pair, draws, seed);
    json inputs{{"x1", x1}, {"n1", n1}, {"x2", x2}, {"n2", n2}};
    return assemble("test-two-prop", std::move(inputs), to_json(prior), pair, summary, prior_mass,
                    seed, draws);
}

json run_test_ratio(long x1, long n1, long x2, long n2, RatioMeasure measure, BetaPrior prior,
                    const HypothesisPair& pair, long draws, std::uint64_t seed) {
    RandomStream stream(seed, 0);
    const PosteriorSummary summary =
        two_prop_ratio_posterior(x1, n1, x2, n2, measure, prior, pair, draws, stream);
    const PriorMassResult prior_mass =
        try_prior_mass(TwoPropRatioPrior{prior, prior, measure}, pair, draws, seed);
    json inputs{{"x1", x1}, {"n1", n1}, {"x2", x2}, {"n2", n2}, {"measure", to_string(measure)}};
    return assemble("test-ratio", std::move(inputs), to_json(prior), pair, summary, prior_mass,
                    seed, draws);
}

json run_test_mean(const SampleStats& stats, const NormalPrior& prior, const HypothesisPair& pair) {
    const PosteriorSummary summary = mean_summary(mean_posterior(stats, prior), pair);
    const PriorMassResult prior_mass = try_prior_mass(prior, pair, 0, 0);
    json inputs{{"n", stats.n}, {"mean", stats.ybar}, {"s2", stats.s2}};
    return assemble("test-mean", std::move(inputs), to_json(prior), pair, summary, prior_mass,
                    std::nullopt, std::nullopt);
}

json run_test_mean_diff(const SampleStats& stats1, const SampleStats& stats2,
                        const NormalPrior& prior1, const NormalPrior& prior2,
                        const HypothesisPair& pair, long draws, std::uint64_t seed) {
    RandomStream stream(seed, 0);
    const PosteriorSummary summary =
        mean_diff_two_groups(stats1, stats2, prior1, prior2, pair, draws, stream);
    const PriorMassResult prior_mass =
        try_prior_mass(MeanDiffPrior{prior1, prior2}, pair, draws, seed);
    json inputs{{"n1", stats1.n}, {"mean1", stats1.ybar}, {"s2_1", stats1.s2},
                {"n2", stats2.n}, {"mean2", stats2.ybar}, {"s2_2", stats2.s2}};
    json prior_doc{{"group1", to_json(prior1)}, {"group2", to_json(prior2)}};
    return assemble("test-mean-diff", std::move(inputs), std::move(prior_doc), pair, summary,
                    prior_mass, seed, draws);
}

json run_test_summary_ratio(double point_estimate, double ci_lower, double ci_upper,
                            double ci_level, double prior_sd_log, const HypothesisPair& pair) {
    const PosteriorSummary summary =
        summary_log_posterior(point_estimate, ci_lower, ci_upper, ci_level, prior_sd_log, pair);
    const PriorMassResult prior_mass = try_prior_mass(LogNormalRatioPrior{prior_sd_log}, pair, 0, 0);
    json inputs{{"point", point_estimate},
                {"ci_lower", ci_lower},
                {"ci_upper", ci_upper},
                {"ci_level", ci_level},
                {"prior_sd_log", prior_sd_log}};
    json prior_doc{{"type", "log-normal-ratio"}, {"mean_log", 0.0}, {"sd_log", prior_sd_log}};
    return assemble("test-summary-ratio", std::move(inputs), std::move(prior_doc), pair, summary,
                    prior_mass, std::nullopt, std::nullopt);
}

}  // namespace twoit::cli
