// twoit: two-interval Bayesian tests from the command line.
//
// Exit codes: 0 = a verdict (or simulation) was computed, 1 = a replicate
// check missed its band, 2 = validation error, 3 = numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/replicate.hpp"
#include "cli/serialization.hpp"
#include "twoit/errors.hpp"
#include "twoit/simulation.hpp"

namespace {

using twoit::cli::json;

constexpr std::uint64_t kDefaultSeed = 20250808;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("TWOIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw twoit::ValidationError("TWOIT_SEED is not an unsigned integer");
        }
    }
    return kDefaultSeed;
}

void emit(const json& doc, const std::string& out_path, const std::string& format) {
    std::string text;
    if (format == "json") {
        text = doc.dump(2);
        text += '\n';
    } else if (format == "csv") {
        text = twoit::cli::to_flat_csv(doc);
    } else {
        throw twoit::ValidationError("unknown format '" + format + "' (expected json or csv)");
    }
    if (out_path.empty() || out_path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw twoit::ValidationError("cannot open output path '" + out_path + "'");
    out << text;
}

// Shared flag bundles -------------------------------------------------------

struct PairFlags {
    twoit::cli::PairOptions options;
    double target = 0.0;
    bool has_target = false;

    void add_to(CLI::App* cmd, bool allow_target, bool allow_complement) {
        cmd->add_option("--hp", options.hp, "H_P interval: lower upper")->expected(2);
        cmd->add_option("--ha", options.ha, "H_A interval: lower upper")->expected(2);
        if (allow_complement)
            cmd->add_flag("--ha-complement", options.ha_complement,
                          "H_A is the complement of H_P");
        if (allow_target)
            cmd->add_option("--target", target,
                            "build the log-scale pair from a target ratio")
                ->each([this](const std::string&) { has_target = true; });
        cmd->add_option("--pi", options.pi, "acceptance threshold (must exceed 0.5)")
            ->capture_default_str();
        cmd->add_option("--rule", options.rule,
                        "decision rule: probability-threshold|cri-inclusion")
            ->capture_default_str();
        cmd->add_option("--cri-level", options.cri_level, "credible interval level")
            ->capture_default_str();
    }

    twoit::HypothesisPair build(twoit::Scale scale) {
        if (has_target) options.target = target;
        return twoit::cli::build_pair(options, scale);
    }
};

struct OutputFlags {
    std::string out = "-";
    std::string format = "json";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--out", out, "output path ('-' for stdout)")->capture_default_str();
        cmd->add_option("--format", format, "output format: json|csv")->capture_default_str();
    }
};

struct NormalPriorFlags {
    twoit::NormalPrior prior{0.0, 1e-3, 1e-3, 1.0};  // low-informative default

    void add_to(CLI::App* cmd) {
        cmd->add_option("--mu0", prior.mu0, "prior mean")->capture_default_str();
        cmd->add_option("--kappa0", prior.kappa0, "prior observations for the mean")
            ->capture_default_str();
        cmd->add_option("--nu0", prior.nu0, "prior observations for the variance")
            ->capture_default_str();
        cmd->add_option("--sigma02", prior.sigma02, "prior variance guess")->capture_default_str();
    }
};

void write_manifest(const std::string& command, const std::string& out_path,
                    const std::string& manifest_path, bool no_manifest,
                    const twoit::cli::SimulationConfig& config) {
    if (no_manifest) return;
    const std::string path = manifest_path.empty() ? out_path + ".manifest.json" : manifest_path;
    json manifest;
    manifest["command"] = command;
    manifest["output"] = out_path;
    manifest["config"] = twoit::cli::config_echo(config);
    std::ofstream out(path);
    if (!out) throw twoit::ValidationError("cannot open manifest path '" + path + "'");
    out << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian two-interval tests: posterior masses of two prespecified\n"
                 "interval hypotheses, four-way verdicts, and the simulation harness."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "twoit 0.1.0");

    // Common state bound into subcommand callbacks.
    int exit_code = 0;

    // ---- test-prop ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("test-prop", "one proportion against two intervals (exact)");
        auto x = std::make_shared<long>(0);
        auto n = std::make_shared<long>(0);
        auto prior = std::make_shared<std::string>("jeffreys");
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--x", *x, "successes")->required();
        cmd->add_option("--n", *n, "trials")->required();
        cmd->add_option("--prior", *prior, "beta prior: jeffreys|uniform|a,b")->capture_default_str();
        pair_flags->add_to(cmd, false, true);
        output->add_to(cmd);
        cmd->callback([=]() {
            const auto pair = pair_flags->build(twoit::Scale::Natural);
            emit(twoit::cli::run_test_prop(*x, *n, twoit::cli::parse_beta_prior_option(*prior), pair),
                 output->out, output->format);
        });
    }

    // ---- test-two-prop ------------------------------------------------
    {
        auto* cmd = app.add_subcommand("test-two-prop",
                                       "difference of two proportions (Monte Carlo)");
        auto x1 = std::make_shared<long>(0);
        auto n1 = std::make_shared<long>(0);
        auto x2 = std::make_shared<long>(0);
        auto n2 = std::make_shared<long>(0);
        auto prior = std::make_shared<std::string>("jeffreys");
        auto draws = std::make_shared<long>(100000);
        auto seed = std::make_shared<std::optional<std::uint64_t>>();
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--x1", *x1, "successes, group 1")->required();
        cmd->add_option("--n1", *n1, "trials, group 1")->required();
        cmd->add_option("--x2", *x2, "successes, group 2")->required();
        cmd->add_option("--n2", *n2, "trials, group 2")->required();
        cmd->add_option("--prior", *prior, "beta prior: jeffreys|uniform|a,b")->capture_default_str();
        cmd->add_option("--draws", *draws, "posterior draws (>= 10000)")->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed (fallback: TWOIT_SEED)");
        pair_flags->add_to(cmd, false, true);
        output->add_to(cmd);
        cmd->callback([=]() {
            const auto pair = pair_flags->build(twoit::Scale::Natural);
            emit(twoit::cli::run_test_two_prop(*x1, *n1, *x2, *n2,
                                               twoit::cli::parse_beta_prior_option(*prior), pair,
                                               *draws, resolve_seed(*seed)),
                 output->out, output->format);
        });
    }

    // ---- test-ratio ---------------------------------------------------
    {
        auto* cmd = app.add_subcommand("test-ratio", "RR or OR of two proportions (Monte Carlo)");
        auto x1 = std::make_shared<long>(0);
        auto n1 = std::make_shared<long>(0);
        auto x2 = std::make_shared<long>(0);
        auto n2 = std::make_shared<long>(0);
        auto measure = std::make_shared<std::string>("rr");
        auto prior = std::make_shared<std::string>("jeffreys");
        auto draws = std::make_shared<long>(100000);
        auto seed = std::make_shared<std::optional<std::uint64_t>>();
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--x1", *x1, "successes, group 1")->required();
        cmd->add_option("--n1", *n1, "trials, group 1")->required();
        cmd->add_option("--x2", *x2, "successes, group 2")->required();
        cmd->add_option("--n2", *n2, "trials, group 2")->required();
        cmd->add_option("--measure", *measure, "rr|or")->capture_default_str();
        cmd->add_option("--prior", *prior, "beta prior: jeffreys|uniform|a,b")->capture_default_str();
        cmd->add_option("--draws", *draws, "posterior draws (>= 10000)")->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed (fallback: TWOIT_SEED)");
        pair_flags->add_to(cmd, true, false);
        output->add_to(cmd);
        cmd->callback([=]() {
            const auto pair = pair_flags->build(twoit::Scale::Log);
            const auto m = *measure == "rr" ? twoit::RatioMeasure::RelativeRisk
                         : *measure == "or" ? twoit::RatioMeasure::OddsRatio
                                            : throw twoit::ValidationError("--measure expects rr or or");
            emit(twoit::cli::run_test_ratio(*x1, *n1, *x2, *n2, m,
                                            twoit::cli::parse_beta_prior_option(*prior), pair,
                                            *draws, resolve_seed(*seed)),
                 output->out, output->format);
        });
    }

    // ---- test-mean ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("test-mean", "one mean against two intervals (exact)");
        auto n = std::make_shared<long>(0);
        auto mean = std::make_shared<double>(0.0);
        auto sd = std::make_shared<double>(0.0);
        auto data = std::make_shared<std::string>();
        auto prior_flags = std::make_shared<NormalPriorFlags>();
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--n", *n, "sample size");
        cmd->add_option("--mean", *mean, "sample mean");
        cmd->add_option("--sd", *sd, "sample standard deviation (n-1 divisor)");
        cmd->add_option("--data", *data, "file with one observation per line")
            ->check(CLI::ExistingFile);
        prior_flags->add_to(cmd);
        pair_flags->add_to(cmd, false, true);
        output->add_to(cmd);
        cmd->callback([=]() {
            twoit::SampleStats stats;
            if (!data->empty()) {
                std::ifstream in(*data);
                double value = 0.0;
                double sum = 0.0, m2 = 0.0;
                long count = 0;
                while (in >> value) {
                    ++count;
                    const double delta = value - sum;
                    sum += delta / static_cast<double>(count);
                    m2 += delta * (value - sum);
                }
                if (count == 0) throw twoit::ValidationError("--data file holds no numbers");
                stats = twoit::make_sample_stats(count, sum,
                                                 count > 1 ? m2 / static_cast<double>(count - 1) : 0.0);
            } else {
                stats = twoit::make_sample_stats(*n, *mean, (*sd) * (*sd));
            }
            const auto pair = pair_flags->build(twoit::Scale::Natural);
            emit(twoit::cli::run_test_mean(stats, prior_flags->prior, pair), output->out,
                 output->format);
        });
    }

    // ---- test-mean-diff -------------------------------------------------
    {
        auto* cmd = app.add_subcommand("test-mean-diff",
                                       "difference of two means (Monte Carlo)");
        auto n1 = std::make_shared<long>(0);
        auto mean1 = std::make_shared<double>(0.0);
        auto sd1 = std::make_shared<double>(0.0);
        auto n2 = std::make_shared<long>(0);
        auto mean2 = std::make_shared<double>(0.0);
        auto sd2 = std::make_shared<double>(0.0);
        auto draws = std::make_shared<long>(100000);
        auto seed = std::make_shared<std::optional<std::uint64_t>>();
        auto prior_flags = std::make_shared<NormalPriorFlags>();
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--n1", *n1, "sample size, group 1")->required();
        cmd->add_option("--mean1", *mean1, "sample mean, group 1")->required();
        cmd->add_option("--sd1", *sd1, "sample sd, group 1")->required();
        cmd->add_option("--n2", *n2, "sample size, group 2")->required();
        cmd->add_option("--mean2", *mean2, "sample mean, group 2")->required();
        cmd->add_option("--sd2", *sd2, "sample sd, group 2")->required();
        cmd->add_option("--draws", *draws, "posterior draws (>= 10000)")->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed (fallback: TWOIT_SEED)");
        prior_flags->add_to(cmd);
        pair_flags->add_to(cmd, false, true);
        output->add_to(cmd);
        cmd->callback([=]() {
            const auto pair = pair_flags->build(twoit::Scale::Natural);
            emit(twoit::cli::run_test_mean_diff(
                     twoit::make_sample_stats(*n1, *mean1, (*sd1) * (*sd1)),
                     twoit::make_sample_stats(*n2, *mean2, (*sd2) * (*sd2)), prior_flags->prior,
                     prior_flags->prior, pair, *draws, resolve_seed(*seed)),
                 output->out, output->format);
        });
    }

    // ---- test-summary-ratio ----------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "test-summary-ratio", "ratio from a published point estimate and CI (exact, log scale)");
        auto point = std::make_shared<double>(0.0);
        auto ci_lower = std::make_shared<double>(0.0);
        auto ci_upper = std::make_shared<double>(0.0);
        auto ci_level = std::make_shared<double>(0.95);
        auto prior_sd = std::make_shared<double>(std::log(20.0) / 1.96);
        auto pair_flags = std::make_shared<PairFlags>();
        auto output = std::make_shared<OutputFlags>();
        cmd->add_option("--point", *point, "published point estimate")->required();
        cmd->add_option("--ci-lower", *ci_lower, "published CI lower bound")->required();
        cmd->add_option("--ci-upper", *ci_upper, "published CI upper bound")->required();
        cmd->add_option("--ci-level", *ci_level, "published CI level")->capture_default_str();
        cmd->add_option("--prior-sd-log", *prior_sd, "sd of the zero-mean log-scale prior")
            ->capture_default_str();
        pair_flags->add_to(cmd, true, false);
        output->add_to(cmd);
        cmd->callback([=]() {
            const auto pair = pair_flags->build(twoit::Scale::Log);
            emit(twoit::cli::run_test_summary_ratio(*point, *ci_lower, *ci_upper, *ci_level,
                                                    *prior_sd, pair),
                 output->out, output->format);
        });
    }

    // ---- simulate-oc / simulate-bias -------------------------------------
    {
        auto* cmd = app.add_subcommand("simulate-oc",
                                       "operating-characteristics sweep from a config file");
        auto config_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>("oc.csv");
        auto manifest = std::make_shared<std::string>();
        auto no_manifest = std::make_shared<bool>(false);
        auto workers = std::make_shared<int>(-1);
        cmd->add_option("--config", *config_path, "key=value config file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", *out, "output CSV path")->capture_default_str();
        cmd->add_option("--manifest", *manifest, "manifest path (default <out>.manifest.json)");
        cmd->add_flag("--no-manifest", *no_manifest, "skip the manifest file");
        cmd->add_option("--workers", *workers, "worker threads (0 = all cores)");
        cmd->callback([=]() {
            auto config = twoit::cli::load_simulation_config(*config_path);
            if (*workers >= 0) config.workers = *workers;
            std::vector<twoit::OCCell> cells;
            switch (config.grid.situation) {
                case twoit::Situation::OneProp:
                    cells = twoit::exact_one_prop_oc(config.grid, config.workers);
                    break;
                case twoit::Situation::TwoProp:
                    cells = twoit::mc_two_prop_oc(config.grid, config.workers);
                    break;
                case twoit::Situation::Mean:
                    cells = twoit::mc_mean_oc(config.grid, config.workers).cells;
                    break;
            }
            std::ofstream file(*out);
            if (!file) throw twoit::ValidationError("cannot open output path '" + *out + "'");
            twoit::write_oc_csv(file, config.grid.situation, cells);
            write_manifest("simulate-oc", *out, *manifest, *no_manifest, config);
        });
    }
    {
        auto* cmd = app.add_subcommand("simulate-bias",
                                       "selection-bias table sweep (mean situation)");
        auto config_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>("bias.csv");
        auto oc_out = std::make_shared<std::string>();
        auto manifest = std::make_shared<std::string>();
        auto no_manifest = std::make_shared<bool>(false);
        auto workers = std::make_shared<int>(-1);
        cmd->add_option("--config", *config_path, "key=value config file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", *out, "output CSV path")->capture_default_str();
        cmd->add_option("--oc-out", *oc_out, "also write the OC cells to this CSV");
        cmd->add_option("--manifest", *manifest, "manifest path (default <out>.manifest.json)");
        cmd->add_flag("--no-manifest", *no_manifest, "skip the manifest file");
        cmd->add_option("--workers", *workers, "worker threads (0 = all cores)");
        cmd->callback([=]() {
            auto config = twoit::cli::load_simulation_config(*config_path);
            if (*workers >= 0) config.workers = *workers;
            if (config.grid.situation != twoit::Situation::Mean)
                throw twoit::ValidationError("simulate-bias needs situation = mean");
            const auto result = twoit::mc_mean_oc(config.grid, config.workers);
            std::ofstream file(*out);
            if (!file) throw twoit::ValidationError("cannot open output path '" + *out + "'");
            twoit::write_bias_csv(file, twoit::bias_quantiles(result.records));
            if (!oc_out->empty()) {
                std::ofstream oc_file(*oc_out);
                if (!oc_file)
                    throw twoit::ValidationError("cannot open output path '" + *oc_out + "'");
                twoit::write_oc_csv(oc_file, twoit::Situation::Mean, result.cells);
            }
            write_manifest("simulate-bias", *out, *manifest, *no_manifest, config);
        });
    }

    // ---- replicate -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("replicate", "rerun the bundled reference analyses");
        auto mode = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>("replication");
        auto seed = std::make_shared<std::optional<std::uint64_t>>();
        auto table_n = std::make_shared<std::vector<int>>();
        auto only = std::make_shared<std::string>();
        auto workers = std::make_shared<int>(0);
        cmd->add_option("mode", *mode,
                        "example1|example2|example3|or-consistency|tables|figures")
            ->required();
        cmd->add_option("--out", *out, "report directory")->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed (fallback: TWOIT_SEED)");
        cmd->add_option("--n", *table_n, "tables: restrict to these sample sizes");
        cmd->add_option("--only", *only, "figures: run a single figure (fig1..fig5, fig67)");
        cmd->add_option("--workers", *workers, "worker threads (0 = all cores)");
        cmd->callback([=, &exit_code]() {
            exit_code = twoit::cli::run_replicate(*mode, *out, resolve_seed(*seed), *table_n,
                                                  *only, *workers);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::fprintf(stderr, "{\"error\":\"validation\",\"message\":%s}\n",
                     json(std::string(e.what())).dump().c_str());
        return 2;
    } catch (const twoit::ValidationError& e) {
        std::fprintf(stderr, "{\"error\":\"validation\",\"message\":%s}\n",
                     json(std::string(e.what())).dump().c_str());
        return 2;
    } catch (const twoit::NumericalError& e) {
        std::fprintf(stderr, "{\"error\":\"numerical\",\"message\":%s}\n",
                     json(std::string(e.what())).dump().c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"internal\",\"message\":%s}\n",
                     json(std::string(e.what())).dump().c_str());
        return 3;
    }
    return exit_code;
}
