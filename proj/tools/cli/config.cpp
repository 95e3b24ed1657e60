#include "cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cli/serialization.hpp"
#include "twoit/errors.hpp"

namespace twoit::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': '" + value + "' is not a number");
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long parsed = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': '" + value + "' is not an integer");
    }
}

std::vector<int> parse_n_grid(const std::string& value) {
    std::vector<int> grid;
    if (value.find(':') != std::string::npos) {
        int lo = 0, hi = 0, step = 0;
        if (std::sscanf(value.c_str(), "%d:%d:%d", &lo, &hi, &step) != 3 || step <= 0)
            throw ValidationError("config key 'n_grid': range must be lo:hi:step");
        for (int n = lo; n <= hi; n += step) grid.push_back(n);
        return grid;
    }
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        grid.push_back(static_cast<int>(to_long("n_grid", trim(item))));
    return grid;
}

BetaPrior parse_beta_prior(const std::string& value) {
    if (value == "jeffreys") return BetaPrior{0.5, 0.5};
    if (value == "uniform") return BetaPrior{1.0, 1.0};
    double a = 0.0, b = 0.0;
    if (std::sscanf(value.c_str(), "%lf,%lf", &a, &b) != 2)
        throw ValidationError("config key 'prior': expected jeffreys, uniform, or a,b");
    return BetaPrior{a, b};
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!kv.emplace(key, value).second)
            throw ValidationError("config key '" + key + "' given twice");
    }

    SimulationConfig config;
    ScenarioGrid& grid = config.grid;
    std::string prior_mu0 = "truth";
    for (const auto& [key, value] : kv) {
        if (key == "situation") {
            if (value == "one-prop") grid.situation = Situation::OneProp;
            else if (value == "two-prop") grid.situation = Situation::TwoProp;
            else if (value == "mean") grid.situation = Situation::Mean;
            else throw ValidationError("config key 'situation': unknown value '" + value + "'");
        } else if (key == "scenario_id") grid.scenario_id = value;
        else if (key == "truth_a") grid.truth_a = to_double(key, value);
        else if (key == "truth_p") grid.truth_p = to_double(key, value);
        else if (key == "baseline") grid.baseline = to_double(key, value);
        else if (key == "width") grid.width = to_double(key, value);
        else if (key == "pi") grid.pi = to_double(key, value);
        else if (key == "rule") grid.rule = rule_from_string(value);
        else if (key == "cri_level") grid.cri_level = to_double(key, value);
        else if (key == "n_grid") grid.n_grid = parse_n_grid(value);
        else if (key == "n_sims") grid.n_sims = static_cast<int>(to_long(key, value));
        else if (key == "mc_draws") grid.mc_draws = to_long(key, value);
        else if (key == "data_sd") grid.data_sd = to_double(key, value);
        else if (key == "prior") grid.beta_prior = parse_beta_prior(value);
        else if (key == "prior_mu0") prior_mu0 = value;
        else if (key == "prior_kappa0") grid.prior_a.kappa0 = grid.prior_p.kappa0 = to_double(key, value);
        else if (key == "prior_nu0") grid.prior_a.nu0 = grid.prior_p.nu0 = to_double(key, value);
        else if (key == "prior_sigma02") grid.prior_a.sigma02 = grid.prior_p.sigma02 = to_double(key, value);
        else if (key == "seed") grid.seed = static_cast<std::uint64_t>(to_long(key, value));
        else if (key == "workers") config.workers = static_cast<int>(to_long(key, value));
        else throw ValidationError("config key '" + key + "' is not recognised");
    }
    if (prior_mu0 == "truth") {
        grid.prior_a.mu0 = grid.truth_a;
        grid.prior_p.mu0 = grid.truth_p;
    } else {
        grid.prior_a.mu0 = grid.prior_p.mu0 = to_double("prior_mu0", prior_mu0);
    }
    if (grid.scenario_id.empty()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s_a%g_p%g_w%g", to_string(grid.situation), grid.truth_a,
                      grid.truth_p, grid.width);
        grid.scenario_id = buf;
    }
    if (grid.n_grid.empty()) throw ValidationError("config is missing 'n_grid'");
    return config;
}

SimulationConfig load_simulation_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config file '" + path + "' does not exist");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_simulation_config(buffer.str());
}

std::string config_echo(const SimulationConfig& config) {
    const ScenarioGrid& grid = config.grid;
    std::ostringstream out;
    out << "situation = " << to_string(grid.situation) << '\n'
        << "scenario_id = " << grid.scenario_id << '\n'
        << "truth_a = " << grid.truth_a << '\n'
        << "truth_p = " << grid.truth_p << '\n'
        << "baseline = " << grid.baseline << '\n'
        << "width = " << grid.width << '\n'
        << "pi = " << grid.pi << '\n'
        << "rule = " << to_string(grid.rule) << '\n'
        << "cri_level = " << grid.cri_level << '\n'
        << "n_grid = ";
    for (std::size_t i = 0; i < grid.n_grid.size(); ++i) out << (i ? "," : "") << grid.n_grid[i];
    out << '\n'
        << "n_sims = " << grid.n_sims << '\n'
        << "mc_draws = " << grid.mc_draws << '\n'
        << "data_sd = " << grid.data_sd << '\n'
        << "prior = " << grid.beta_prior.a << ',' << grid.beta_prior.b << '\n'
        << "prior_mu0_a = " << grid.prior_a.mu0 << '\n'
        << "prior_mu0_p = " << grid.prior_p.mu0 << '\n'
        << "prior_kappa0 = " << grid.prior_a.kappa0 << '\n'
        << "prior_nu0 = " << grid.prior_a.nu0 << '\n'
        << "prior_sigma02 = " << grid.prior_a.sigma02 << '\n'
        << "seed = " << grid.seed << '\n'
        << "workers = " << config.workers << '\n';
    return out.str();
}

}  // namespace twoit::cli
