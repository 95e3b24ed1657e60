#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "twoit/errors.hpp"
#include "twoit/random.hpp"
#include "twoit/special_functions.hpp"

using namespace twoit;

TEST_CASE("reg_inc_beta basic values") {
    CHECK(reg_inc_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(reg_inc_beta(0.3, 1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("reg_inc_beta against the quadrature oracle") {
    // Frozen from the quadrature oracle; recomputed here to keep it honest.
    const double frozen = 0.4599823291262617;
    const double quad = oracle::beta_cdf(0.72, 131.5, 50.5);
    CHECK(std::fabs(quad - frozen) < 1e-11);
    CHECK(std::fabs(reg_inc_beta(0.72, 131.5, 50.5) - frozen) < 1e-12);

    // More spots across parameter regimes. With a parameter below one the
    // density is singular at an endpoint and the Simpson oracle itself only
    // reaches ~1e-10 there, so those spots get the looser band.
    for (const auto& [x, a, b] : {std::tuple{0.25, 12.0, 2.0}, std::tuple{0.6, 80.0, 360.0},
                                  std::tuple{0.45, 5.5, 5.5}}) {
        CHECK(std::fabs(reg_inc_beta(x, a, b) - oracle::beta_cdf(x, a, b)) < 1e-11);
    }
    for (const auto& [x, a, b] : {std::tuple{0.1, 0.5, 0.5}, std::tuple{0.9, 3.0, 0.7}}) {
        CHECK(std::fabs(reg_inc_beta(x, a, b) - oracle::beta_cdf(x, a, b)) < 5e-10);
    }
}

TEST_CASE("reg_inc_beta is monotone in x and satisfies the complement identity") {
    RandomStream stream(11, 0);
    for (int i = 0; i < 500; ++i) {
        const double a = 0.2 + 400.0 * stream.uniform() * stream.uniform();
        const double b = 0.2 + 400.0 * stream.uniform() * stream.uniform();
        const double x = stream.uniform();
        const double y = stream.uniform();
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        CHECK(reg_inc_beta(lo, a, b) <= reg_inc_beta(hi, a, b) + 1e-15);
        CHECK(std::fabs(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) - 1.0) < 1e-12);
    }
}

TEST_CASE("reg_inc_beta domain errors") {
    CHECK_THROWS_AS(reg_inc_beta(-0.1, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(reg_inc_beta(1.1, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(reg_inc_beta(0.5, 1.0, -2.0), ValidationError);
}

TEST_CASE("beta_quantile trivial and derived values") {
    CHECK(beta_quantile(0.5, 3.0, 3.0) == 0.5);
    CHECK(beta_quantile(0.25, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    // Frozen via bisection on the quadrature CDF.
    const double frozen = 0.2184145076316417;
    const double bisected = oracle::invert_by_bisection(
        [](double x) { return oracle::beta_cdf(x, 79.5, 359.5); }, 0.975, 0.0, 1.0);
    CHECK(std::fabs(bisected - frozen) < 1e-9);
    CHECK(std::fabs(beta_quantile(0.975, 79.5, 359.5) - frozen) < 1e-9);
}

TEST_CASE("beta_quantile roundtrip property") {
    RandomStream stream(12, 0);
    for (int i = 0; i < 500; ++i) {
        const double a = 0.3 + 300.0 * stream.uniform() * stream.uniform();
        const double b = 0.3 + 300.0 * stream.uniform() * stream.uniform();
        const double p = 0.001 + 0.998 * stream.uniform();
        const double x = beta_quantile(p, a, b);
        CHECK(std::fabs(reg_inc_beta(x, a, b) - p) < 1e-9);
    }
    CHECK_THROWS_AS(beta_quantile(0.0, 2.0, 2.0), ValidationError);
    CHECK_THROWS_AS(beta_quantile(1.0, 2.0, 2.0), ValidationError);
}

TEST_CASE("normal cdf and quantile") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::fabs(normal_cdf(1.96) - 0.9750021048517795) < 1e-12);
    CHECK(std::fabs(normal_cdf(1.96) - oracle::normal_cdf(1.96)) < 1e-12);
    for (const double z : {-6.0, -2.2, -0.3, 0.4, 1.5, 5.0}) {
        CHECK(std::fabs(normal_cdf(z) + normal_cdf(-z) - 1.0) < 1e-15);
        CHECK(std::fabs(normal_quantile(normal_cdf(z)) - z) < 1e-9);
        CHECK(std::fabs(normal_cdf(z) - oracle::normal_cdf(z)) < 1e-12);
    }
}

TEST_CASE("student t cdf") {
    // Cauchy closed form: 1/2 + atan(t)/pi.
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(student_t_cdf(0.0, 7.0) == 0.5);
    for (const double t : {-4.0, -1.0, 0.7, 2.5}) {
        for (const double nu : {1.0, 4.0, 30.0, 250.0}) {
            CHECK(student_t_cdf(t, nu) + student_t_cdf(-t, nu) == 1.0);  // exact mirror
            const double q = student_t_quantile(student_t_cdf(t, nu), nu);
            CHECK(std::fabs(q - t) < 1e-8);
        }
    }
}

TEST_CASE("student t approaches the normal for huge degrees of freedom") {
    for (double t = -6.0; t <= 6.0; t += 0.5)
        CHECK(std::fabs(student_t_cdf(t, 1e6) - normal_cdf(t)) < 1e-5);
}

TEST_CASE("binomial pmf") {
    CHECK(binomial_pmf(5, 10, 0.5) == doctest::Approx(0.24609375).epsilon(1e-12));
    CHECK(binomial_pmf(0, 7, 0.0) == 1.0);
    CHECK(binomial_pmf(7, 7, 1.0) == 1.0);
    CHECK(binomial_pmf(-1, 7, 0.3) == 0.0);
    CHECK(binomial_pmf(8, 7, 0.3) == 0.0);
    double total = 0.0;
    for (long k = 0; k <= 20; ++k) total += binomial_pmf(k, 20, 0.37);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(binomial_pmf(1, 4, 1.2), ValidationError);
}
