#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/serialization.hpp"
#include "twoit/errors.hpp"

using namespace twoit;
using twoit::cli::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json reference_two_prop_doc() {
    const auto pair = make_pair(make_hypothesis(HypothesisLabel::Present, 0.1, 0.3),
                                make_hypothesis(HypothesisLabel::Absent, -0.1, 0.1), 0.95);
    return cli::run_test_two_prop(5, 20, 3, 20, BetaPrior{1.0, 1.0}, pair, 10000, 7);
}

}  // namespace

TEST_CASE("result document schema is pinned by the golden file") {
    const std::filesystem::path golden =
        std::filesystem::path(TWOIT_TEST_DATA_DIR) / "two_prop.json";
    const std::string expected = slurp(golden);
    const std::string actual = reference_two_prop_doc().dump(2) + "\n";
    CHECK(actual == expected);
}

TEST_CASE("result documents are byte-stable across runs") {
    CHECK(reference_two_prop_doc().dump(2) == reference_two_prop_doc().dump(2));
}

TEST_CASE("flat CSV rendering") {
    const json doc{{"a", 1}, {"b", json{{"c", 2.5}, {"d", "x"}}}, {"e", json::array({"p", "q"})}};
    const std::string csv = cli::to_flat_csv(doc);
    CHECK(csv == "a,b.c,b.d,e\n1,2.5,x,p;q\n");
}

TEST_CASE("pair options build every pair flavour") {
    cli::PairOptions options;
    options.hp = {0.1, 0.3};
    options.ha = {-0.1, 0.1};
    const auto pair = cli::build_pair(options, Scale::Natural);
    CHECK(pair.disjoint);

    cli::PairOptions complement;
    complement.hp = {-5.0, 5.0};
    complement.ha_complement = true;
    CHECK(cli::build_pair(complement, Scale::Natural).ha_complement);

    cli::PairOptions target;
    target.target = 1.7;
    CHECK(cli::build_pair(target, Scale::Log).scale() == Scale::Log);
    CHECK_THROWS_AS(cli::build_pair(target, Scale::Natural), ValidationError);

    cli::PairOptions missing;
    missing.hp = {0.1, 0.3};
    CHECK_THROWS_AS(cli::build_pair(missing, Scale::Natural), ValidationError);
}

TEST_CASE("beta prior option parsing") {
    CHECK(cli::parse_beta_prior_option("jeffreys").a == 0.5);
    CHECK(cli::parse_beta_prior_option("uniform").b == 1.0);
    CHECK(cli::parse_beta_prior_option("2,5").b == 5.0);
    CHECK_THROWS_AS(cli::parse_beta_prior_option("bogus"), ValidationError);
}

TEST_CASE("simulation config parsing") {
    const std::string text =
        "# demo sweep\n"
        "situation = two-prop\n"
        "truth_a = 0\n"
        "truth_p = 0.2\n"
        "baseline = 0.5\n"
        "width = 0.2\n"
        "rule = probability-threshold\n"
        "n_grid = 20,100,400\n"
        "n_sims = 500\n"
        "mc_draws = 20000\n"
        "prior = jeffreys\n"
        "seed = 11\n"
        "workers = 2\n";
    const auto config = cli::parse_simulation_config(text);
    CHECK(config.grid.situation == Situation::TwoProp);
    CHECK(config.grid.n_grid == std::vector<int>{20, 100, 400});
    CHECK(config.grid.mc_draws == 20000);
    CHECK(config.grid.beta_prior.a == 0.5);
    CHECK(config.workers == 2);
    CHECK(config.grid.scenario_id == "two-prop_a0_p0.2_w0.2");  // derived default

    const auto ranged = cli::parse_simulation_config("situation = one-prop\nn_grid = 10:50:10\n");
    CHECK(ranged.grid.n_grid == std::vector<int>{10, 20, 30, 40, 50});

    CHECK_THROWS_AS(cli::parse_simulation_config("bogus_key = 1\nn_grid = 10\n"), ValidationError);
    CHECK_THROWS_AS(cli::parse_simulation_config("situation = one-prop\n"), ValidationError);
    CHECK_THROWS_AS(cli::parse_simulation_config("n_grid = 10\nn_grid = 20\n"), ValidationError);

    // prior_mu0 = truth centres the mean priors on the truths.
    const auto mean_config = cli::parse_simulation_config(
        "situation = mean\ntruth_a = 10\ntruth_p = 11\nn_grid = 100\nprior_kappa0 = 1\n");
    CHECK(mean_config.grid.prior_a.mu0 == 10.0);
    CHECK(mean_config.grid.prior_p.mu0 == 11.0);
}

TEST_CASE("the binary maps errors to exit codes and honours TWOIT_SEED") {
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "twoit_cli_test";
    std::filesystem::create_directories(tmp);
    const std::string base = std::string(TWOIT_CLI_PATH);
    const std::string err_file = (tmp / "err.txt").string();

    // Validation error: pi at the boundary.
    std::string cmd = base +
                      " test-two-prop --x1 1 --n1 10 --x2 1 --n2 10 --ha -0.1 0.1 --hp 0.1 0.3 "
                      "--pi 0.5 >/dev/null 2>" +
                      err_file;
    int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 2);
    const std::string err = slurp(err_file);
    CHECK(err.find("{\"error\":\"validation\"") == 0);
    CHECK(err.find("pi must exceed 0.5") != std::string::npos);

    // Unknown flags are validation errors too.
    cmd = base + " test-prop --bogus 1 >/dev/null 2>/dev/null";
    rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 2);

    // Seed fallback through the environment.
    const std::string out_file = (tmp / "out.json").string();
    cmd = "TWOIT_SEED=99 " + base +
          " test-two-prop --x1 5 --n1 20 --x2 3 --n2 20 --ha -0.1 0.1 --hp 0.1 0.3 "
          "--draws 10000 --out " +
          out_file;
    rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 0);
    const json doc = json::parse(slurp(out_file));
    CHECK(doc.at("seed").get<std::uint64_t>() == 99);
    CHECK(doc.at("posterior").at("seed").get<std::uint64_t>() == 99);

    std::filesystem::remove_all(tmp);
}
