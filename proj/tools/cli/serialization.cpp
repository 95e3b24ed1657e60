#include "cli/serialization.hpp"

#include <cmath>
#include <sstream>

#include "twoit/errors.hpp"

namespace twoit::cli {

namespace {

// JSON has no Infinity; the ratio sentinel becomes null plus a flag.
json finite_or_null(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

}  // namespace

json to_json(const IntervalHypothesis& h) {
    return json{{"label", to_string(h.label)}, {"lower", h.lower}, {"upper", h.upper}};
}

json to_json(const HypothesisPair& pair) {
    json j;
    j["h_p"] = to_json(pair.h_p);
    j["h_a"] = pair.ha_complement ? json("complement-of-h_p") : to_json(pair.h_a);
    j["scale"] = to_string(pair.scale());
    j["pi"] = pair.pi;
    j["rule"] = to_string(pair.rule);
    j["cri_level"] = pair.cri_level;
    j["disjoint"] = pair.disjoint;
    return j;
}

json to_json(const PosteriorSummary& s) {
    json j;
    j["point"] = s.point;
    j["cri_lower"] = s.cri_lower;
    j["cri_upper"] = s.cri_upper;
    j["cri_level"] = s.cri_level;
    j["mass_hp"] = s.mass_hp;
    j["mass_ha"] = s.mass_ha;
    j["method"] = to_string(s.method);
    if (s.method == SummaryMethod::MonteCarlo) {
        j["draws"] = s.draws;
        j["seed"] = s.seed;
        j["stream_id"] = s.stream_id;
    }
    j["scale"] = to_string(s.scale);
    return j;
}

json to_json(const Verdict& v) {
    json j;
    j["outcome"] = to_string(v.outcome);
    j["mass_hp"] = v.mass_hp;
    j["mass_ha"] = v.mass_ha;
    j["posterior_ratio"] = finite_or_null(v.posterior_ratio);
    j["ratio_is_infinite"] = v.ratio_is_infinite;
    j["bayes_factor"] = v.bayes_factor ? finite_or_null(*v.bayes_factor) : json(nullptr);
    j["cri_length"] = v.cri_length;
    j["rule"] = to_string(v.rule_used);
    j["trend"] = v.trend;
    j["notes"] = v.notes;
    return j;
}

json to_json(const BetaPrior& prior) {
    return json{{"type", "beta"}, {"a", prior.a}, {"b", prior.b}};
}

json to_json(const NormalPrior& prior) {
    return json{{"type", "normal-mean"},
                {"mu0", prior.mu0},
                {"kappa0", prior.kappa0},
                {"nu0", prior.nu0},
                {"sigma02", prior.sigma02}};
}

Scale scale_from_string(const std::string& name) {
    if (name == "natural") return Scale::Natural;
    if (name == "log") return Scale::Log;
    throw ValidationError("unknown scale '" + name + "' (expected natural or log)");
}

DecisionRule rule_from_string(const std::string& name) {
    if (name == "probability-threshold" || name == "prob") return DecisionRule::ProbabilityThreshold;
    if (name == "cri-inclusion" || name == "cri") return DecisionRule::CrIInclusion;
    throw ValidationError("unknown rule '" + name +
                          "' (expected probability-threshold or cri-inclusion)");
}

HypothesisPair pair_from_json(const json& j) {
    const Scale scale = scale_from_string(j.at("scale").get<std::string>());
    const auto& jp = j.at("h_p");
    IntervalHypothesis h_p = make_hypothesis(HypothesisLabel::Present, jp.at("lower").get<double>(),
                                             jp.at("upper").get<double>(), scale);
    const double pi = j.at("pi").get<double>();
    const DecisionRule rule = rule_from_string(j.at("rule").get<std::string>());
    const double cri_level = j.at("cri_level").get<double>();
    if (j.at("h_a").is_string()) {
        if (j.at("h_a").get<std::string>() != "complement-of-h_p")
            throw ValidationError("unknown h_a encoding");
        return complement_pair(h_p, pi, rule, cri_level);
    }
    const auto& ja = j.at("h_a");
    IntervalHypothesis h_a = make_hypothesis(HypothesisLabel::Absent, ja.at("lower").get<double>(),
                                             ja.at("upper").get<double>(), scale);
    return make_pair(h_p, h_a, pi, rule, cri_level);
}

namespace {

void flatten(const json& node, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& values) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, keys, values);
    } else if (node.is_array()) {
        std::ostringstream joined;
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (i > 0) joined << ';';
            joined << (node[i].is_string() ? node[i].get<std::string>() : node[i].dump());
        }
        keys.push_back(prefix);
        values.push_back(joined.str());
    } else {
        keys.push_back(prefix);
        values.push_back(node.is_string() ? node.get<std::string>() : node.dump());
    }
}

}  // namespace

std::string to_flat_csv(const json& doc) {
    std::vector<std::string> keys;
    std::vector<std::string> values;
    flatten(doc, "", keys, values);
    std::ostringstream out;
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
    out << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << '\n';
    return out.str();
}

}  // namespace twoit::cli
