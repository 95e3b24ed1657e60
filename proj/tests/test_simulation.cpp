#include <doctest.h>

#include <cmath>
#include <sstream>

#include "twoit/errors.hpp"
#include "twoit/simulation.hpp"

using namespace twoit;

namespace {

ScenarioGrid one_prop_grid(double truth_a, double truth_p, double width, std::vector<int> n_grid) {
    ScenarioGrid grid;
    grid.situation = Situation::OneProp;
    grid.scenario_id = "test";
    grid.truth_a = truth_a;
    grid.truth_p = truth_p;
    grid.width = width;
    grid.rule = DecisionRule::CrIInclusion;
    grid.n_grid = std::move(n_grid);
    grid.seed = 3;
    return grid;
}

double cell_value(const std::vector<OCCell>& cells, DecisionRule rule, int n, TruthLabel truth,
                  bool accept_hp) {
    for (const OCCell& cell : cells)
        if (cell.rule == rule && cell.n == n && cell.truth == truth)
            return accept_hp ? cell.p_accept_hp : cell.p_accept_ha;
    REQUIRE(false);
    return 0.0;
}

}  // namespace

TEST_CASE("exact one-proportion OC reaches full power at width 0.2") {
    const auto cells = exact_one_prop_oc(one_prop_grid(0.5, 0.7, 0.2, {1000}), 2);
    CHECK(cell_value(cells, DecisionRule::CrIInclusion, 1000, TruthLabel::HP, true) > 0.99);
    CHECK(cell_value(cells, DecisionRule::CrIInclusion, 1000, TruthLabel::HA, false) > 0.99);
    // Both rules are emitted side by side.
    CHECK(cell_value(cells, DecisionRule::ProbabilityThreshold, 1000, TruthLabel::HP, true) > 0.99);
}

TEST_CASE("exact one-proportion OC misclassification stays below 5%") {
    const auto cells = exact_one_prop_oc(one_prop_grid(0.5, 0.7, 0.2, {10, 50, 100, 400, 1000}), 2);
    for (const OCCell& cell : cells) {
        const double wrong = cell.truth == TruthLabel::HA ? cell.p_accept_hp : cell.p_accept_ha;
        CHECK(wrong <= 0.05);
    }
}

TEST_CASE("symmetric scenarios produce identical curves") {
    std::vector<int> grid;
    for (int n = 10; n <= 200; n += 10) grid.push_back(n);
    const auto cells = exact_one_prop_oc(one_prop_grid(0.45, 0.55, 0.1, grid), 2);
    for (const int n : grid) {
        const double ha = cell_value(cells, DecisionRule::CrIInclusion, n, TruthLabel::HA, false);
        const double hp = cell_value(cells, DecisionRule::CrIInclusion, n, TruthLabel::HP, true);
        CHECK(std::fabs(ha - hp) < 1e-12);
    }
}

TEST_CASE("swapping hypothesis labels permutes the OC columns exactly") {
    const std::vector<int> grid{40, 120, 360};
    const auto forward = exact_one_prop_oc(one_prop_grid(0.4, 0.6, 0.2, grid), 2);
    const auto swapped = exact_one_prop_oc(one_prop_grid(0.6, 0.4, 0.2, grid), 2);
    for (const int n : grid) {
        CHECK(cell_value(forward, DecisionRule::CrIInclusion, n, TruthLabel::HP, true) ==
              cell_value(swapped, DecisionRule::CrIInclusion, n, TruthLabel::HA, false));
        CHECK(cell_value(forward, DecisionRule::CrIInclusion, n, TruthLabel::HA, true) ==
              cell_value(swapped, DecisionRule::CrIInclusion, n, TruthLabel::HP, false));
    }
}

TEST_CASE("exact OC guards against absurd sample sizes") {
    CHECK_THROWS_AS(exact_one_prop_oc(one_prop_grid(0.5, 0.7, 0.2, {2000000}), 1),
                    ValidationError);
    CHECK_THROWS_AS(exact_one_prop_oc(one_prop_grid(0.5, 0.7, 0.2, {100, 50}), 1),
                    ValidationError);  // grid must increase
}

TEST_CASE("two-proportion OC cells are deterministic across worker counts") {
    ScenarioGrid grid;
    grid.situation = Situation::TwoProp;
    grid.scenario_id = "sup";
    grid.truth_a = 0.0;
    grid.truth_p = 0.2;
    grid.baseline = 0.5;
    grid.width = 0.2;
    grid.rule = DecisionRule::ProbabilityThreshold;
    grid.n_grid = {20};
    grid.n_sims = 200;
    grid.mc_draws = 10000;
    grid.seed = 12345;
    const auto one = mc_two_prop_oc(grid, 1);
    const auto two = mc_two_prop_oc(grid, 2);
    REQUIRE(one.size() == two.size());
    std::ostringstream csv1, csv2;
    write_oc_csv(csv1, Situation::TwoProp, one);
    write_oc_csv(csv2, Situation::TwoProp, two);
    CHECK(csv1.str() == csv2.str());
    // At N = 20 the posterior is far too wide to accept anything often.
    for (const OCCell& cell : one) {
        CHECK(cell.p_accept_hp < 0.2);
        CHECK(cell.p_accept_ha < 0.2);
    }
}

TEST_CASE("mean OC collects bias records and is deterministic") {
    ScenarioGrid grid;
    grid.situation = Situation::Mean;
    grid.scenario_id = "bias";
    grid.truth_a = 10.0;
    grid.truth_p = 11.0;
    grid.width = 1.0;
    grid.rule = DecisionRule::CrIInclusion;
    grid.n_grid = {120, 400};
    grid.n_sims = 400;
    grid.data_sd = 3.0;
    grid.prior_a = NormalPrior{10.0, 1.0, 1.0, 9.0};
    grid.prior_p = NormalPrior{11.0, 1.0, 1.0, 9.0};
    grid.seed = 777;
    const auto one = mc_mean_oc(grid, 1);
    const auto two = mc_mean_oc(grid, 2);
    REQUIRE(one.records.size() == two.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        CHECK(one.records[i].sample_mean == two.records[i].sample_mean);
        CHECK(one.records[i].accepted == two.records[i].accepted);
    }

    const auto table = bias_quantiles(one.records);
    // Selection bias: accepted replications have smaller spread, and the gap
    // narrows with the sample size.
    double gap120 = 0.0, gap400 = 0.0;
    for (const int n : {120, 400}) {
        const BiasRow* accepted = nullptr;
        const BiasRow* rejected = nullptr;
        for (const BiasRow& row : table.rows) {
            if (row.n != n || row.truth != TruthLabel::HA) continue;
            (row.accepted ? accepted : rejected) = &row;
        }
        if (accepted == nullptr) continue;  // tiny acceptance rate at N=120
        REQUIRE(rejected != nullptr);
        CHECK(accepted->sd_q[1] <= rejected->sd_q[1]);
        (n == 120 ? gap120 : gap400) = rejected->sd_q[1] - accepted->sd_q[1];
    }
    if (gap120 > 0.0 && gap400 > 0.0) CHECK(gap400 < gap120);
}

TEST_CASE("bias quantiles handle degenerate groups") {
    std::vector<BiasRecord> records;
    records.push_back(BiasRecord{100, TruthLabel::HA, true, 10.0, 2.5});
    records.push_back(BiasRecord{100, TruthLabel::HA, false, 9.0, 3.5});
    records.push_back(BiasRecord{100, TruthLabel::HA, false, 11.0, 3.0});
    records.push_back(BiasRecord{200, TruthLabel::HP, false, 11.0, 3.1});
    const auto table = bias_quantiles(records);
    // Single-record group: all three quantiles collapse onto it.
    const BiasRow* row = nullptr;
    for (const BiasRow& r : table.rows)
        if (r.n == 100 && r.accepted) row = &r;
    REQUIRE(row != nullptr);
    CHECK(row->mean_q[0] == 10.0);
    CHECK(row->mean_q[1] == 10.0);
    CHECK(row->mean_q[2] == 10.0);
    CHECK(row->count == 1);
    // (200, HP, accepted) is empty and flagged.
    bool warned = false;
    for (const auto& warning : table.warnings)
        if (warning.find("n=200") != std::string::npos &&
            warning.find("accepted=yes") != std::string::npos)
            warned = true;
    CHECK(warned);
}

TEST_CASE("bimodality coefficient separates one mode from two") {
    RandomStream stream(91, 0);
    std::vector<double> unimodal(4000);
    for (double& v : unimodal) v = sample_normal(0.0, 1.0, stream);
    CHECK(bimodality_coefficient(unimodal) < kBimodalityThreshold);

    std::vector<double> bimodal(4000);
    for (std::size_t i = 0; i < bimodal.size(); ++i)
        bimodal[i] = sample_normal(i % 2 == 0 ? -2.0 : 2.0, 0.5, stream);
    CHECK(bimodality_coefficient(bimodal) > kBimodalityThreshold);

    std::vector<double> uniform(4000);
    for (double& v : uniform) v = stream.uniform();
    CHECK(bimodality_coefficient(uniform) == doctest::Approx(5.0 / 9.0).epsilon(0.08));
}

TEST_CASE("CSV schemas") {
    ScenarioGrid grid = one_prop_grid(0.5, 0.7, 0.2, {50});
    const auto cells = exact_one_prop_oc(grid, 1);
    std::ostringstream oc;
    write_oc_csv(oc, Situation::OneProp, cells);
    std::istringstream lines(oc.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "situation,scenario_id,n,truth,p_accept_hp,p_accept_ha,p_serendipity,p_insufficient,"
          "method,n_sims,seed");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 4);  // one n, two truths, two rules

    std::vector<BiasRecord> records{{100, TruthLabel::HA, true, 10.0, 2.5},
                                    {100, TruthLabel::HA, false, 9.5, 3.2}};
    std::ostringstream bias;
    write_bias_csv(bias, bias_quantiles(records));
    std::istringstream bias_lines(bias.str());
    std::getline(bias_lines, header);
    CHECK(header == "n,truth,accepted,count,mean_q025,mean_q50,mean_q975,sd_q025,sd_q50,sd_q975");
}
