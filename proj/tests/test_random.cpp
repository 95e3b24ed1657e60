#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "twoit/errors.hpp"
#include "twoit/random.hpp"
#include "twoit/special_functions.hpp"

using namespace twoit;

TEST_CASE("streams are bit-identical for the same (seed, stream_id)") {
    RandomStream a(123456789, 42);
    RandomStream b(123456789, 42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    // Sampler sequences too, including the normal cache.
    RandomStream c(7, 3), d(7, 3);
    for (int i = 0; i < 200; ++i) {
        CHECK(sample_normal(0.0, 1.0, c) == sample_normal(0.0, 1.0, d));
        CHECK(sample_beta(0.5, 0.5, c) == sample_beta(0.5, 0.5, d));
        CHECK(sample_binomial(30, 0.4, c) == sample_binomial(30, 0.4, d));
        CHECK(sample_scaled_inv_chi2(5.0, 2.0, c) == sample_scaled_inv_chi2(5.0, 2.0, d));
    }
}

TEST_CASE("distinct stream ids decorrelate") {
    RandomStream a(99, 0);
    RandomStream b(99, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("degenerate binomial draws") {
    RandomStream stream(5, 0);
    CHECK(sample_binomial(10, 0.0, stream) == 0);
    CHECK(sample_binomial(10, 1.0, stream) == 10);
    CHECK(sample_binomial(0, 0.5, stream) == 0);
}

TEST_CASE("beta draws have the Jeffreys symmetry") {
    RandomStream stream(2024, 0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_beta(0.5, 0.5, stream);
    CHECK(std::fabs(sum / n - 0.5) < 0.002);
}

TEST_CASE("beta draws match the CDF in KS distance") {
    RandomStream stream(31, 0);
    std::vector<double> draws(100000);
    for (double& d : draws) d = sample_beta(2.0, 5.0, stream);
    const double ks =
        oracle::ks_distance(std::move(draws), [](double x) { return reg_inc_beta(x, 2.0, 5.0); });
    CHECK(ks < 0.01);
}

TEST_CASE("normal draws match the CDF in KS distance") {
    RandomStream stream(32, 0);
    std::vector<double> draws(100000);
    for (double& d : draws) d = sample_normal(3.0, 2.0, stream);
    const double ks = oracle::ks_distance(std::move(draws),
                                          [](double x) { return normal_cdf((x - 3.0) / 2.0); });
    CHECK(ks < 0.01);
}

TEST_CASE("gamma and scaled inverse chi-squared moments") {
    RandomStream stream(33, 0);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_gamma(0.5, stream);  // shape < 1 path
    CHECK(std::fabs(sum / n - 0.5) < 0.01);
    // E[scaled-inv-chi2(nu, s2)] = nu s2 / (nu - 2).
    sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_scaled_inv_chi2(10.0, 2.0, stream);
    CHECK(std::fabs(sum / n - 2.5) < 0.03);
}

TEST_CASE("sampler domain errors") {
    RandomStream stream(1, 0);
    CHECK_THROWS_AS(sample_normal(0.0, 0.0, stream), ValidationError);
    CHECK_THROWS_AS(sample_gamma(0.0, stream), ValidationError);
    CHECK_THROWS_AS(sample_beta(0.0, 1.0, stream), ValidationError);
    CHECK_THROWS_AS(sample_binomial(-1, 0.5, stream), ValidationError);
    CHECK_THROWS_AS(sample_binomial(5, 1.5, stream), ValidationError);
    CHECK_THROWS_AS(sample_scaled_inv_chi2(0.0, 1.0, stream), ValidationError);
}
