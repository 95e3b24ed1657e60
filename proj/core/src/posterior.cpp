#include "twoit/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "twoit/errors.hpp"
#include "twoit/special_functions.hpp"

namespace twoit {

namespace {

// Type-7 (linear interpolation) quantile of an unsorted sample; rearranges v.
double interpolated_quantile(std::vector<double>& v, double q) {
    const std::size_t n = v.size();
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
    const double lo = v[i];
    const double frac = pos - static_cast<double>(i);
    if (frac == 0.0 || i + 1 == n) return lo;
    const double hi = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(i) + 1, v.end());
    return lo + frac * (hi - lo);
}

void validate_draw_count(long draws) {
    if (draws < kMinDraws) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "draws must be at least %ld (got %ld)", kMinDraws, draws);
        throw ValidationError(buf);
    }
}

// Shared tail of the Monte Carlo engines: masses by counting, equal-tailed
// CrI and median by interpolated order statistics.
PosteriorSummary summarize_draws(std::vector<double>& values, const HypothesisPair& pair,
                                 Scale scale, const RandomStream& stream) {
    const double n = static_cast<double>(values.size());
    long in_hp = 0;
    long in_ha = 0;
    for (const double v : values) {
        if (pair.h_p.contains(v)) ++in_hp;
        if (!pair.ha_complement && pair.h_a.contains(v)) ++in_ha;
    }
    PosteriorSummary s;
    s.mass_hp = static_cast<double>(in_hp) / n;
    s.mass_ha = pair.ha_complement ? static_cast<double>(values.size() - in_hp) / n
                                   : static_cast<double>(in_ha) / n;
    const double alpha = 0.5 * (1.0 - pair.cri_level);
    s.cri_lower = interpolated_quantile(values, alpha);
    s.cri_upper = interpolated_quantile(values, 1.0 - alpha);
    s.point = interpolated_quantile(values, 0.5);
    s.cri_level = pair.cri_level;
    s.method = SummaryMethod::MonteCarlo;
    s.draws = static_cast<long>(values.size());
    s.seed = stream.seed();
    s.stream_id = stream.stream_id();
    s.scale = scale;
    return s;
}

double clamped_note(double value, double lo, double hi, const char* which,
                    std::vector<std::string>& notes) {
    const double clamped = std::clamp(value, lo, hi);
    if (clamped != value) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s bound %.6g clamped to %.6g", which, value, clamped);
        notes.emplace_back(buf);
    }
    return clamped;
}

}  // namespace

double NormalMeanPosterior::scale() const {
    return std::sqrt(sigma2_n / kappa_n);
}

SampleStats make_sample_stats(long n, double ybar, double s2) {
    if (n < 0) throw ValidationError("sample size must be non-negative");
    if (n > 0 && !std::isfinite(ybar)) throw ValidationError("sample mean must be finite");
    if (!(s2 >= 0.0)) throw ValidationError("sample variance must be non-negative");
    if (n < 2 && s2 != 0.0)
        throw ValidationError("a sample variance requires at least two observations");
    return SampleStats{n, ybar, s2};
}

BetaPosterior one_prop_posterior(long x, long n, BetaPrior prior) {
    if (n < 0) throw ValidationError("one_prop_posterior: n must be non-negative");
    if (x < 0) throw ValidationError("one_prop_posterior: x must be non-negative");
    if (x > n) throw ValidationError("one_prop_posterior: successes exceed trials");
    if (!(prior.a >= 0.0) || !(prior.b >= 0.0))
        throw ValidationError("one_prop_posterior: prior parameters must be non-negative");
    BetaPosterior post{prior.a + static_cast<double>(x),
                       prior.b + static_cast<double>(n - x)};
    if (!(post.a > 0.0) || !(post.b > 0.0))
        throw ValidationError("one_prop_posterior: degenerate data for a zero prior parameter");
    return post;
}

double beta_interval_mass(const BetaPosterior& post, double lower, double upper) {
    const double lo = std::clamp(lower, 0.0, 1.0);
    const double hi = std::clamp(upper, 0.0, 1.0);
    if (hi <= lo) return 0.0;
    const double mass = reg_inc_beta(hi, post.a, post.b) - reg_inc_beta(lo, post.a, post.b);
    return std::max(mass, 0.0);
}

PosteriorSummary one_prop_summary(const BetaPosterior& post, const HypothesisPair& pair) {
    if (pair.scale() != Scale::Natural)
        throw ValidationError("one_prop_summary: pair must be on the natural scale");
    PosteriorSummary s;
    const double alpha = 0.5 * (1.0 - pair.cri_level);
    s.point = beta_quantile(0.5, post.a, post.b);
    s.cri_lower = beta_quantile(alpha, post.a, post.b);
    s.cri_upper = beta_quantile(1.0 - alpha, post.a, post.b);
    s.cri_level = pair.cri_level;
    double p_lo = clamped_note(pair.h_p.lower, 0.0, 1.0, "H_P lower", s.notes);
    double p_hi = clamped_note(pair.h_p.upper, 0.0, 1.0, "H_P upper", s.notes);
    s.mass_hp = beta_interval_mass(post, p_lo, p_hi);
    if (pair.ha_complement) {
        s.mass_ha = 1.0 - s.mass_hp;
    } else {
        double a_lo = clamped_note(pair.h_a.lower, 0.0, 1.0, "H_A lower", s.notes);
        double a_hi = clamped_note(pair.h_a.upper, 0.0, 1.0, "H_A upper", s.notes);
        s.mass_ha = beta_interval_mass(post, a_lo, a_hi);
    }
    s.method = SummaryMethod::Exact;
    s.scale = Scale::Natural;
    return s;
}

PosteriorSummary two_prop_diff_posterior(long x1, long n1, long x2, long n2, BetaPrior prior,
                                         const HypothesisPair& pair, long draws,
                                         RandomStream& stream) {
    validate_draw_count(draws);
    if (pair.scale() != Scale::Natural)
        throw ValidationError("two_prop_diff_posterior: pair must be on the natural scale");
    const BetaPosterior post1 = one_prop_posterior(x1, n1, prior);
    const BetaPosterior post2 = one_prop_posterior(x2, n2, prior);
    std::vector<double> deltas(static_cast<std::size_t>(draws));
    for (double& d : deltas)
        d = sample_beta(post1.a, post1.b, stream) - sample_beta(post2.a, post2.b, stream);
    return summarize_draws(deltas, pair, Scale::Natural, stream);
}

PosteriorSummary two_prop_ratio_posterior(long x1, long n1, long x2, long n2,
                                          RatioMeasure measure, BetaPrior prior,
                                          const HypothesisPair& pair, long draws,
                                          RandomStream& stream) {
    validate_draw_count(draws);
    if (pair.scale() != Scale::Log)
        throw ValidationError("two_prop_ratio_posterior: pair must be on the log scale");
    const BetaPosterior post1 = one_prop_posterior(x1, n1, prior);
    const BetaPosterior post2 = one_prop_posterior(x2, n2, prior);
    std::vector<double> ratios(static_cast<std::size_t>(draws));
    for (double& r : ratios) {
        // Keep draws inside the open unit interval so odds stay finite.
        const double p1 = std::clamp(sample_beta(post1.a, post1.b, stream), 1e-300, 1.0 - 1e-16);
        const double p2 = std::clamp(sample_beta(post2.a, post2.b, stream), 1e-300, 1.0 - 1e-16);
        r = measure == RatioMeasure::RelativeRisk ? p1 / p2
                                                  : (p1 / (1.0 - p1)) / (p2 / (1.0 - p2));
    }
    return summarize_draws(ratios, pair, Scale::Log, stream);
}

NormalMeanPosterior mean_posterior(const SampleStats& stats, const NormalPrior& prior) {
    if (!(prior.kappa0 >= 0.0) || !(prior.nu0 >= 0.0))
        throw ValidationError("mean_posterior: kappa0 and nu0 must be non-negative");
    if (!(prior.sigma02 > 0.0)) throw ValidationError("mean_posterior: sigma02 must be positive");
    if (stats.n < 0) throw ValidationError("mean_posterior: negative sample size");
    if (!(stats.s2 >= 0.0)) throw ValidationError("mean_posterior: negative sample variance");
    const double n = static_cast<double>(stats.n);
    const double kappa_n = prior.kappa0 + n;
    const double nu_n = prior.nu0 + n;
    if (!(kappa_n > 0.0) || !(nu_n > 0.0))
        throw ValidationError("mean_posterior: improper posterior (no data and no prior weight)");
    const double mu_n = (prior.kappa0 * prior.mu0 + n * stats.ybar) / kappa_n;
    const double dev = stats.ybar - prior.mu0;
    const double sigma2_n = (prior.nu0 * prior.sigma02 + (n - 1.0) * stats.s2 +
                             prior.kappa0 * n / kappa_n * dev * dev) /
                            nu_n;
    if (!(sigma2_n > 0.0))
        throw NumericalError("mean_posterior: degenerate posterior variance");
    return NormalMeanPosterior{mu_n, kappa_n, nu_n, sigma2_n};
}

double mean_interval_mass(const NormalMeanPosterior& post, double lower, double upper) {
    if (upper <= lower) return 0.0;
    const double scale = post.scale();
    const double mass = student_t_cdf((upper - post.mu_n) / scale, post.nu_n) -
                        student_t_cdf((lower - post.mu_n) / scale, post.nu_n);
    return std::max(mass, 0.0);
}

PosteriorSummary mean_summary(const NormalMeanPosterior& post, const HypothesisPair& pair) {
    if (pair.scale() != Scale::Natural)
        throw ValidationError("mean_summary: pair must be on the natural scale");
    PosteriorSummary s;
    const double scale = post.scale();
    const double tq = student_t_quantile(0.5 * (1.0 + pair.cri_level), post.nu_n);
    s.point = post.mu_n;
    s.cri_lower = post.mu_n - tq * scale;
    s.cri_upper = post.mu_n + tq * scale;
    s.cri_level = pair.cri_level;
    s.mass_hp = mean_interval_mass(post, pair.h_p.lower, pair.h_p.upper);
    s.mass_ha = pair.ha_complement ? 1.0 - s.mass_hp
                                   : mean_interval_mass(post, pair.h_a.lower, pair.h_a.upper);
    s.method = SummaryMethod::Exact;
    s.scale = Scale::Natural;
    return s;
}

PosteriorSummary mean_diff_two_groups(const SampleStats& stats1, const SampleStats& stats2,
                                      const NormalPrior& prior1, const NormalPrior& prior2,
                                      const HypothesisPair& pair, long draws,
                                      RandomStream& stream) {
    validate_draw_count(draws);
    if (pair.scale() != Scale::Natural)
        throw ValidationError("mean_diff_two_groups: pair must be on the natural scale");
    if (stats1.n < 2 || stats2.n < 2)
        throw ValidationError("mean_diff_two_groups: both groups need at least two observations");
    const NormalMeanPosterior post1 = mean_posterior(stats1, prior1);
    const NormalMeanPosterior post2 = mean_posterior(stats2, prior2);
    std::vector<double> diffs(static_cast<std::size_t>(draws));
    for (double& d : diffs) {
        const double v1 = sample_scaled_inv_chi2(post1.nu_n, post1.sigma2_n, stream);
        const double m1 = sample_normal(post1.mu_n, std::sqrt(v1 / post1.kappa_n), stream);
        const double v2 = sample_scaled_inv_chi2(post2.nu_n, post2.sigma2_n, stream);
        const double m2 = sample_normal(post2.mu_n, std::sqrt(v2 / post2.kappa_n), stream);
        d = m1 - m2;
    }
    return summarize_draws(diffs, pair, Scale::Natural, stream);
}

PosteriorSummary summary_log_posterior(double point_estimate, double ci_lower, double ci_upper,
                                       double ci_level, double prior_sd_log,
                                       const HypothesisPair& pair) {
    if (pair.scale() != Scale::Log)
        throw ValidationError("summary_log_posterior: pair must be on the log scale");
    if (!(ci_lower > 0.0) || !(ci_lower < point_estimate) || !(point_estimate < ci_upper))
        throw ValidationError("summary_log_posterior: need 0 < ci_lower < point < ci_upper");
    if (!(ci_level > 0.0) || !(ci_level < 1.0))
        throw ValidationError("summary_log_posterior: ci_level must lie in (0, 1)");
    if (!(prior_sd_log > 0.0))
        throw ValidationError("summary_log_posterior: prior_sd_log must be positive");

    const double z = normal_quantile(0.5 * (1.0 + ci_level));
    const double se = (std::log(ci_upper) - std::log(ci_lower)) / (2.0 * z);
    const double prec_lik = 1.0 / (se * se);
    const double prec_prior = 1.0 / (prior_sd_log * prior_sd_log);
    const double prec_post = prec_prior + prec_lik;
    const double mu_post = std::log(point_estimate) * prec_lik / prec_post;  // prior mean 0
    const double var_post = 1.0 / prec_post;
    const double sd_post = std::sqrt(var_post);

    PosteriorSummary s;
    const double zc = normal_quantile(0.5 * (1.0 + pair.cri_level));
    s.point = std::exp(mu_post + 0.5 * var_post);
    s.cri_lower = std::exp(mu_post - zc * sd_post);
    s.cri_upper = std::exp(mu_post + zc * sd_post);
    s.cri_level = pair.cri_level;
    auto log_mass = [&](const IntervalHypothesis& h) {
        return normal_cdf((std::log(h.upper) - mu_post) / sd_post) -
               normal_cdf((std::log(h.lower) - mu_post) / sd_post);
    };
    s.mass_hp = log_mass(pair.h_p);
    s.mass_ha = pair.ha_complement ? 1.0 - s.mass_hp : log_mass(pair.h_a);
    s.method = SummaryMethod::Exact;
    s.scale = Scale::Log;
    return s;
}

const char* to_string(SummaryMethod method) {
    return method == SummaryMethod::Exact ? "exact" : "monte-carlo";
}

const char* to_string(RatioMeasure measure) {
    return measure == RatioMeasure::RelativeRisk ? "rr" : "or";
}

}  // namespace twoit
