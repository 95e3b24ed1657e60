#include "twoit/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "twoit/errors.hpp"
#include "twoit/special_functions.hpp"

namespace twoit {

namespace {

constexpr std::uint64_t kStreamsPerCell = 1ull << 20;
constexpr int kMaxExactN = 1000000;

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Runs fn(0..count-1) on up to `workers` threads. Work items must be
// independent; the first exception wins and is rethrown on the caller.
template <typename Fn>
void parallel_for(std::int64_t count, int workers, Fn&& fn) {
    workers = std::min<std::int64_t>(resolve_workers(workers), count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Sorted-input type-7 quantile.
double sorted_quantile(const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    if (n == 1) return v[0];
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (frac == 0.0 || i + 1 == n) return v[i];
    return v[i] + frac * (v[i + 1] - v[i]);
}

struct OutcomeTally {
    double accept_hp = 0.0;
    double accept_ha = 0.0;
    double serendipity = 0.0;
    double insufficient = 0.0;

    void add(Outcome outcome, double weight) {
        switch (outcome) {
            case Outcome::AcceptHP: accept_hp += weight; break;
            case Outcome::AcceptHA: accept_ha += weight; break;
            case Outcome::Serendipity: serendipity += weight; break;
            case Outcome::InsufficientPower: insufficient += weight; break;
            case Outcome::AmbiguousOverlap: break;  // reported by neither column
        }
    }
};

OCCell make_cell(const ScenarioGrid& grid, const std::string& scenario_id, DecisionRule rule,
                 int n, TruthLabel truth, const OutcomeTally& tally, SummaryMethod method,
                 long n_sims) {
    OCCell cell;
    cell.scenario_id = scenario_id;
    cell.rule = rule;
    cell.n = n;
    cell.truth = truth;
    cell.p_accept_hp = tally.accept_hp;
    cell.p_accept_ha = tally.accept_ha;
    cell.p_serendipity = tally.serendipity;
    cell.p_insufficient = tally.insufficient;
    cell.method = method;
    cell.n_sims = n_sims;
    cell.seed = grid.seed;
    return cell;
}

void check_grid(const ScenarioGrid& grid) {
    if (grid.n_grid.empty()) throw ValidationError("scenario grid has no sample sizes");
    for (std::size_t i = 1; i < grid.n_grid.size(); ++i)
        if (grid.n_grid[i] <= grid.n_grid[i - 1])
            throw ValidationError("n_grid must be strictly increasing");
    if (grid.n_grid.front() < 1) throw ValidationError("sample sizes must be positive");
}

void check_mc_grid(const ScenarioGrid& grid) {
    check_grid(grid);
    if (grid.n_sims < 100) throw ValidationError("Monte Carlo sweeps need n_sims >= 100");
    if (static_cast<std::uint64_t>(grid.n_sims) >= kStreamsPerCell)
        throw ValidationError("n_sims exceeds the per-cell stream budget");
}

}  // namespace

HypothesisPair grid_pair(const ScenarioGrid& grid, DecisionRule rule) {
    return symmetric_pair(grid.truth_a, grid.truth_p, grid.width, grid.pi, rule, grid.cri_level);
}

std::vector<OCPoint> to_oc_points(const std::vector<OCCell>& cells, DecisionRule rule) {
    std::map<int, OCPoint> by_n;
    for (const OCCell& cell : cells) {
        if (cell.rule != rule) continue;
        OCPoint& point = by_n[cell.n];
        point.n = cell.n;
        point.method = cell.method;
        if (cell.truth == TruthLabel::HP) {
            point.p_hp_given_hp = cell.p_accept_hp;
            point.p_ha_given_hp = cell.p_accept_ha;
        } else {
            point.p_hp_given_ha = cell.p_accept_hp;
            point.p_ha_given_ha = cell.p_accept_ha;
        }
    }
    std::vector<OCPoint> points;
    points.reserve(by_n.size());
    for (auto& [n, point] : by_n) points.push_back(point);
    return points;
}

std::vector<OCCell> exact_one_prop_oc(const ScenarioGrid& grid, int workers) {
    if (grid.situation != Situation::OneProp)
        throw ValidationError("exact_one_prop_oc: grid situation must be one-prop");
    check_grid(grid);
    for (const int n : grid.n_grid)
        if (n > kMaxExactN)
            throw ValidationError("exact_one_prop_oc: n exceeds the 10^6 resource guard");

    const HypothesisPair pair_cri = grid_pair(grid, DecisionRule::CrIInclusion);
    const HypothesisPair pair_prob = grid_pair(grid, DecisionRule::ProbabilityThreshold);

    struct PerN {
        OutcomeTally tally[2][2];  // [rule: cri=0, prob=1][truth: HA=0, HP=1]
    };
    std::vector<PerN> results(grid.n_grid.size());

    parallel_for(static_cast<std::int64_t>(grid.n_grid.size()), workers, [&](std::int64_t idx) {
        const int n = grid.n_grid[static_cast<std::size_t>(idx)];
        PerN& out = results[static_cast<std::size_t>(idx)];
        for (long x = 0; x <= n; ++x) {
            const BetaPosterior post = one_prop_posterior(x, n, grid.beta_prior);
            // Masses and CrI depend only on the intervals, not on the rule.
            const PosteriorSummary summary = one_prop_summary(post, pair_cri);
            const Verdict v_cri = evaluate(summary, pair_cri);
            const Verdict v_prob = evaluate(summary, pair_prob);
            const double w_a = binomial_pmf(x, n, grid.truth_a);
            const double w_p = binomial_pmf(x, n, grid.truth_p);
            out.tally[0][0].add(v_cri.outcome, w_a);
            out.tally[0][1].add(v_cri.outcome, w_p);
            out.tally[1][0].add(v_prob.outcome, w_a);
            out.tally[1][1].add(v_prob.outcome, w_p);
        }
    });

    std::vector<OCCell> cells;
    cells.reserve(4 * grid.n_grid.size());
    const DecisionRule rules[2] = {DecisionRule::CrIInclusion, DecisionRule::ProbabilityThreshold};
    const char* suffix[2] = {"/cri", "/prob"};
    for (int r = 0; r < 2; ++r) {
        const std::string scenario_id = grid.scenario_id + suffix[r];
        for (std::size_t i = 0; i < grid.n_grid.size(); ++i) {
            for (int t = 0; t < 2; ++t) {
                cells.push_back(make_cell(grid, scenario_id, rules[r], grid.n_grid[i],
                                          t == 0 ? TruthLabel::HA : TruthLabel::HP,
                                          results[i].tally[r][t], SummaryMethod::Exact, 0));
            }
        }
    }
    return cells;
}

std::vector<OCCell> mc_two_prop_oc(const ScenarioGrid& grid, int workers) {
    if (grid.situation != Situation::TwoProp)
        throw ValidationError("mc_two_prop_oc: grid situation must be two-prop");
    check_mc_grid(grid);
    const HypothesisPair pair = grid_pair(grid, grid.rule);

    const std::size_t n_cells = 2 * grid.n_grid.size();
    const std::int64_t per_cell = grid.n_sims;
    std::vector<Outcome> outcomes(n_cells * static_cast<std::size_t>(per_cell));

    parallel_for(static_cast<std::int64_t>(outcomes.size()), workers, [&](std::int64_t w) {
        const std::size_t cell = static_cast<std::size_t>(w / per_cell);
        const std::int64_t rep = w % per_cell;
        const int n = grid.n_grid[cell / 2];
        const TruthLabel truth = (cell % 2 == 0) ? TruthLabel::HA : TruthLabel::HP;
        const double delta = truth == TruthLabel::HA ? grid.truth_a : grid.truth_p;
        RandomStream stream(grid.seed,
                            static_cast<std::uint64_t>(cell) * kStreamsPerCell +
                                static_cast<std::uint64_t>(rep));
        const long x1 = sample_binomial(n, grid.baseline + delta, stream);
        const long x2 = sample_binomial(n, grid.baseline, stream);
        const PosteriorSummary summary =
            two_prop_diff_posterior(x1, n, x2, n, grid.beta_prior, pair, grid.mc_draws, stream);
        outcomes[static_cast<std::size_t>(w)] = evaluate(summary, pair).outcome;
    });

    std::vector<OCCell> cells;
    cells.reserve(n_cells);
    const double weight = 1.0 / static_cast<double>(per_cell);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        OutcomeTally tally;
        for (std::int64_t rep = 0; rep < per_cell; ++rep)
            tally.add(outcomes[cell * static_cast<std::size_t>(per_cell) +
                               static_cast<std::size_t>(rep)],
                      weight);
        cells.push_back(make_cell(grid, grid.scenario_id, grid.rule, grid.n_grid[cell / 2],
                                  cell % 2 == 0 ? TruthLabel::HA : TruthLabel::HP, tally,
                                  SummaryMethod::MonteCarlo, grid.n_sims));
    }
    return cells;
}

MeanOcResult mc_mean_oc(const ScenarioGrid& grid, int workers) {
    if (grid.situation != Situation::Mean)
        throw ValidationError("mc_mean_oc: grid situation must be mean");
    check_mc_grid(grid);
    if (!(grid.data_sd > 0.0)) throw ValidationError("mc_mean_oc: data_sd must be positive");
    const HypothesisPair pair = grid_pair(grid, grid.rule);

    const std::size_t n_cells = 2 * grid.n_grid.size();
    const std::int64_t per_cell = grid.n_sims;
    std::vector<Outcome> outcomes(n_cells * static_cast<std::size_t>(per_cell));
    std::vector<BiasRecord> records(outcomes.size());

    parallel_for(static_cast<std::int64_t>(outcomes.size()), workers, [&](std::int64_t w) {
        const std::size_t cell = static_cast<std::size_t>(w / per_cell);
        const std::int64_t rep = w % per_cell;
        const int n = grid.n_grid[cell / 2];
        const TruthLabel truth = (cell % 2 == 0) ? TruthLabel::HA : TruthLabel::HP;
        const double mu_truth = truth == TruthLabel::HA ? grid.truth_a : grid.truth_p;
        RandomStream stream(grid.seed,
                            static_cast<std::uint64_t>(cell) * kStreamsPerCell +
                                static_cast<std::uint64_t>(rep));
        // Welford accumulation of the sample mean and variance.
        double mean = 0.0;
        double m2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double value = sample_normal(mu_truth, grid.data_sd, stream);
            const double delta = value - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (value - mean);
        }
        const double s2 = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
        const SampleStats stats{n, mean, s2};
        const NormalPrior& prior = truth == TruthLabel::HA ? grid.prior_a : grid.prior_p;
        const PosteriorSummary summary = mean_summary(mean_posterior(stats, prior), pair);
        const Outcome outcome = evaluate(summary, pair).outcome;
        outcomes[static_cast<std::size_t>(w)] = outcome;
        const bool accepted = truth == TruthLabel::HA ? outcome == Outcome::AcceptHA
                                                      : outcome == Outcome::AcceptHP;
        records[static_cast<std::size_t>(w)] = BiasRecord{n, truth, accepted, mean, std::sqrt(s2)};
    });

    MeanOcResult result;
    result.records = std::move(records);
    result.cells.reserve(n_cells);
    const double weight = 1.0 / static_cast<double>(per_cell);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        OutcomeTally tally;
        for (std::int64_t rep = 0; rep < per_cell; ++rep)
            tally.add(outcomes[cell * static_cast<std::size_t>(per_cell) +
                               static_cast<std::size_t>(rep)],
                      weight);
        result.cells.push_back(make_cell(grid, grid.scenario_id, grid.rule, grid.n_grid[cell / 2],
                                         cell % 2 == 0 ? TruthLabel::HA : TruthLabel::HP, tally,
                                         SummaryMethod::MonteCarlo, grid.n_sims));
    }
    return result;
}

BiasTable bias_quantiles(const std::vector<BiasRecord>& records, std::array<double, 3> probs) {
    BiasTable table;
    table.probs = probs;
    std::map<std::tuple<int, int, int>, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const BiasRecord& rec : records) {
        auto& group = groups[{rec.n, rec.truth == TruthLabel::HP ? 1 : 0, rec.accepted ? 0 : 1}];
        group.first.push_back(rec.sample_mean);
        group.second.push_back(rec.sample_sd);
    }
    // Flag (n, truth) combinations whose accepted or rejected side is empty.
    std::map<std::pair<int, int>, bool> universe;
    for (const BiasRecord& rec : records)
        universe[{rec.n, rec.truth == TruthLabel::HP ? 1 : 0}] = true;
    for (const auto& [key, present] : universe) {
        (void)present;
        for (int accepted = 0; accepted < 2; ++accepted) {
            if (groups.find({key.first, key.second, accepted}) == groups.end()) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "group (n=%d, truth=%s, accepted=%s) is empty",
                              key.first, key.second == 1 ? "HP" : "HA",
                              accepted == 0 ? "yes" : "no");
                table.warnings.emplace_back(buf);
            }
        }
    }
    for (auto& [key, group] : groups) {
        BiasRow row;
        row.n = std::get<0>(key);
        row.truth = std::get<1>(key) == 1 ? TruthLabel::HP : TruthLabel::HA;
        row.accepted = std::get<2>(key) == 0;
        row.count = static_cast<long>(group.first.size());
        std::sort(group.first.begin(), group.first.end());
        std::sort(group.second.begin(), group.second.end());
        for (int i = 0; i < 3; ++i) {
            row.mean_q[static_cast<std::size_t>(i)] = sorted_quantile(group.first, probs[static_cast<std::size_t>(i)]);
            row.sd_q[static_cast<std::size_t>(i)] = sorted_quantile(group.second, probs[static_cast<std::size_t>(i)]);
        }
        table.rows.push_back(row);
    }
    return table;
}

double bimodality_coefficient(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 4) throw ValidationError("bimodality_coefficient: need at least 4 values");
    const double nd = static_cast<double>(n);
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= nd;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    if (!(m2 > 0.0)) throw NumericalError("bimodality_coefficient: zero variance");
    const double skew = m3 / std::pow(m2, 1.5);
    const double excess_kurtosis = m4 / (m2 * m2) - 3.0;
    const double correction = 3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    return (skew * skew + 1.0) / (excess_kurtosis + correction);
}

void write_oc_csv(std::ostream& out, Situation situation, const std::vector<OCCell>& cells) {
    out << "situation,scenario_id,n,truth,p_accept_hp,p_accept_ha,p_serendipity,"
           "p_insufficient,method,n_sims,seed\n";
    char buf[256];
    for (const OCCell& cell : cells) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%.10g,%.10g,%.10g,%.10g,%s,%ld,%llu\n",
                      to_string(situation), cell.scenario_id.c_str(), cell.n,
                      to_string(cell.truth), cell.p_accept_hp, cell.p_accept_ha,
                      cell.p_serendipity, cell.p_insufficient,
                      cell.method == SummaryMethod::Exact ? "exact" : "mc", cell.n_sims,
                      static_cast<unsigned long long>(cell.seed));
        out << buf;
    }
}

void write_bias_csv(std::ostream& out, const BiasTable& table) {
    out << "n,truth,accepted,count,mean_q025,mean_q50,mean_q975,sd_q025,sd_q50,sd_q975\n";
    char buf[256];
    for (const BiasRow& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%s,%ld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      row.n, to_string(row.truth), row.accepted ? "yes" : "no", row.count,
                      row.mean_q[0], row.mean_q[1], row.mean_q[2], row.sd_q[0], row.sd_q[1],
                      row.sd_q[2]);
        out << buf;
    }
}

const char* to_string(Situation situation) {
    switch (situation) {
        case Situation::OneProp: return "one-prop";
        case Situation::TwoProp: return "two-prop";
        case Situation::Mean: return "mean";
    }
    return "unknown";
}

const char* to_string(TruthLabel truth) {
    return truth == TruthLabel::HA ? "HA" : "HP";
}

}  // namespace twoit
