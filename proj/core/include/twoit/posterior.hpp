#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twoit/hypothesis.hpp"
#include "twoit/random.hpp"

namespace twoit {

// ---------------------------------------------------------------------------
// Priors and conjugate posteriors
// ---------------------------------------------------------------------------

// Beta prior for a binomial proportion. Jeffreys by default; (1, 1) is the
// uniform prior. Zero parameters are tolerated at construction but the
// posterior must end up proper.
struct BetaPrior {
    double a = 0.5;
    double b = 0.5;
};

// Beta(a, b) posterior for one proportion.
struct BetaPosterior {
    double a = 0.0;
    double b = 0.0;
};

// Normal mean model with unknown variance (normal--scaled-inverse-chi^2):
// mu0 prior mean, kappa0 prior observations for the mean, nu0 prior
// observations for the variance, sigma02 prior variance guess.
struct NormalPrior {
    double mu0 = 0.0;
    double kappa0 = 0.0;
    double nu0 = 0.0;
    double sigma02 = 1.0;
};

// Posterior for the normal mean model. The marginal posterior of the mean
// is a location-scale Student-t: t_{nu_n}(mu_n, sqrt(sigma2_n / kappa_n)).
struct NormalMeanPosterior {
    double mu_n = 0.0;
    double kappa_n = 0.0;
    double nu_n = 0.0;
    double sigma2_n = 0.0;

    double scale() const;
};

// Summary statistics of one sample; s2 uses the n-1 divisor.
// n = 0 is allowed (no data: the posterior equals the prior).
struct SampleStats {
    long n = 0;
    double ybar = 0.0;
    double s2 = 0.0;
};

SampleStats make_sample_stats(long n, double ybar, double s2);

// ---------------------------------------------------------------------------
// Posterior summaries
// ---------------------------------------------------------------------------

enum class SummaryMethod { Exact, MonteCarlo };

// Point estimate (posterior median, except summary_log_posterior which
// reports the posterior mean of the ratio), equal-tailed credible interval,
// and the posterior masses of the two hypothesis intervals.
struct PosteriorSummary {
    double point = 0.0;
    double cri_lower = 0.0;
    double cri_upper = 0.0;
    double cri_level = 0.95;
    double mass_hp = 0.0;
    double mass_ha = 0.0;
    SummaryMethod method = SummaryMethod::Exact;
    long draws = 0;              // Monte Carlo only
    std::uint64_t seed = 0;      // Monte Carlo only
    std::uint64_t stream_id = 0; // Monte Carlo only
    Scale scale = Scale::Natural;
    std::vector<std::string> notes;  // clamp events, derived completions

    double cri_length() const { return cri_upper - cri_lower; }
};

// ---------------------------------------------------------------------------
// One proportion (exact)
// ---------------------------------------------------------------------------

// Conjugate update: Beta(a + x, b + n - x). Throws when x > n or the
// posterior would be improper.
BetaPosterior one_prop_posterior(long x, long n, BetaPrior prior = {});

// Pr(lower <= p <= upper) under the posterior; the interval is clamped to
// [0, 1] first.
double beta_interval_mass(const BetaPosterior& post, double lower, double upper);

// Exact summary: median point estimate, equal-tailed CrI from beta
// quantiles, interval masses from the Beta CDF.
PosteriorSummary one_prop_summary(const BetaPosterior& post, const HypothesisPair& pair);

// ---------------------------------------------------------------------------
// Two proportions (Monte Carlo)
// ---------------------------------------------------------------------------

inline constexpr long kMinDraws = 10000;

// Posterior of delta = p1 - p2 via independent Beta posterior draws.
PosteriorSummary two_prop_diff_posterior(long x1, long n1, long x2, long n2, BetaPrior prior,
                                         const HypothesisPair& pair, long draws,
                                         RandomStream& stream);

enum class RatioMeasure { RelativeRisk, OddsRatio };

// Posterior of the ratio (RR or OR) via independent Beta posterior draws.
// Summary is on the ratio scale with the Log flag set.
PosteriorSummary two_prop_ratio_posterior(long x1, long n1, long x2, long n2,
                                          RatioMeasure measure, BetaPrior prior,
                                          const HypothesisPair& pair, long draws,
                                          RandomStream& stream);

// ---------------------------------------------------------------------------
// Normal mean (exact) and mean difference (Monte Carlo)
// ---------------------------------------------------------------------------

// Conjugate update:
//   mu_n     = (kappa0 mu0 + n ybar) / (kappa0 + n)
//   sigma2_n = [nu0 sigma02 + (n-1) s2 + kappa0 n / kappa_n (ybar - mu0)^2] / nu_n
// with kappa_n = kappa0 + n and nu_n = nu0 + n.
NormalMeanPosterior mean_posterior(const SampleStats& stats, const NormalPrior& prior);

// Pr(lower <= mu <= upper): Student-t CDF difference at standardized bounds.
double mean_interval_mass(const NormalMeanPosterior& post, double lower, double upper);

PosteriorSummary mean_summary(const NormalMeanPosterior& post, const HypothesisPair& pair);

// Posterior of mu1 - mu2 via joint draws (sigma^2 then mu | sigma^2) from
// each group's posterior.
PosteriorSummary mean_diff_two_groups(const SampleStats& stats1, const SampleStats& stats2,
                                      const NormalPrior& prior1, const NormalPrior& prior2,
                                      const HypothesisPair& pair, long draws,
                                      RandomStream& stream);

// ---------------------------------------------------------------------------
// Published-summary ratio (exact, log scale)
// ---------------------------------------------------------------------------

// Rebuilds a normal likelihood on the log scale from a reported point
// estimate and CI, combines it with a zero-mean normal prior of sd
// prior_sd_log, and reports exact normal-CDF masses. The point estimate is
// the posterior mean of the ratio, exp(mu + sigma^2 / 2).
PosteriorSummary summary_log_posterior(double point_estimate, double ci_lower, double ci_upper,
                                       double ci_level, double prior_sd_log,
                                       const HypothesisPair& pair);

const char* to_string(SummaryMethod method);
const char* to_string(RatioMeasure measure);

}  // namespace twoit
