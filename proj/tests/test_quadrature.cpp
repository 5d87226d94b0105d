#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "chi2pred/errors.hpp"
#include "chi2pred/quadrature.hpp"

using chi2pred::integrate_01_weighted;
using chi2pred::integrate_beta_weighted;
using chi2pred::QuadSettings;

TEST_CASE("beta-weighted quadrature reproduces beta function values") {
    const double cases[][2] = {{1.0, 1.0},  {0.5, 0.5}, {2.5, 3.5}, {0.1, 7.0},
                               {1.0, 14.0}, {6.0, 0.25}, {12.5, 9.5}, {0.05, 1.0}};
    for (const auto& c : cases) {
        const double got = integrate_beta_weighted([](double) { return 1.0; }, c[0], c[1]);
        const double want = std::exp(oracles::log_beta(c[0], c[1]));
        CAPTURE(c[0]);
        CAPTURE(c[1]);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("polynomial factors shift the beta weight") {
    const double cases[][2] = {{0.5, 2.0}, {3.0, 0.7}, {1.5, 1.5}};
    for (const auto& c : cases) {
        const double got = integrate_beta_weighted([](double x) { return x; }, c[0], c[1]);
        const double want = std::exp(oracles::log_beta(c[0] + 1.0, c[1]));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("logarithmic endpoint singularities are handled by the log arguments") {
    // integral of ln(x) over (0,1) = -1
    const double log_int = integrate_01_weighted(
        [](double, double log_x, double) { return log_x; }, 1.0, 1.0);
    CHECK(log_int == doctest::Approx(-1.0).epsilon(1e-12));

    // integral of x^(-1/2) * (-ln x) over (0,1) = 4
    const double weighted = integrate_01_weighted(
        [](double, double log_x, double) { return -log_x; }, 0.5, 1.0);
    CHECK(weighted == doctest::Approx(4.0).epsilon(1e-12));

    // symmetric case at the right endpoint: integral of ln(1-x) = -1
    const double right = integrate_01_weighted(
        [](double, double, double log_1mx) { return log_1mx; }, 1.0, 1.0);
    CHECK(right == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("smooth integrand with sharp beta weight") {
    // integral x^(alpha-1) (1-x)^(beta-1) e^x dx = B(alpha, beta) * 1F1(alpha; alpha+beta; 1);
    // the confluent series converges quickly and serves as the oracle.
    const double alpha = 2.5;
    const double beta = 30.0;
    double term = 1.0;
    double series = 1.0;
    for (int s = 0; s < 200; ++s) {
        term *= (alpha + s) / ((alpha + beta + s) * (1.0 + s));
        series += term;
        if (term < 1e-18)
            break;
    }
    const double want = std::exp(oracles::log_beta(alpha, beta)) * series;
    const double got =
        integrate_beta_weighted([](double x) { return std::exp(x); }, alpha, beta);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("results are deterministic for identical settings") {
    const auto f = [](double x) { return std::cos(3.0 * x); };
    const double first = integrate_beta_weighted(f, 1.3, 2.7);
    const double second = integrate_beta_weighted(f, 1.3, 2.7);
    CHECK(first == second);
}

TEST_CASE("invalid settings and weights are rejected") {
    QuadSettings bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate_beta_weighted([](double) { return 1.0; }, 1.0, 1.0, bad),
                    std::domain_error);
    bad = QuadSettings{};
    bad.abs_tol = -1.0;
    CHECK_THROWS_AS(integrate_beta_weighted([](double) { return 1.0; }, 1.0, 1.0, bad),
                    std::domain_error);
    bad = QuadSettings{};
    bad.max_refinement_level = 0;
    CHECK_THROWS_AS(integrate_beta_weighted([](double) { return 1.0; }, 1.0, 1.0, bad),
                    std::domain_error);
    CHECK_THROWS_AS(integrate_beta_weighted([](double) { return 1.0; }, 0.0, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(integrate_beta_weighted([](double) { return 1.0; }, 1.0, -2.0),
                    std::domain_error);
}

TEST_CASE("failure to converge reports the best estimate") {
    // A kink slows tanh-sinh convergence; with the refinement budget capped the
    // integrator must throw and still carry a usable estimate of
    // integral |x - 1/3| dx = 5/18.
    QuadSettings strict;
    strict.rel_tol = 1e-15;
    strict.abs_tol = 1e-300;
    strict.max_refinement_level = 2;
    bool thrown = false;
    try {
        integrate_beta_weighted([](double x) { return std::abs(x - 1.0 / 3.0); }, 1.0, 1.0,
                                strict);
    } catch (const chi2pred::quadrature_error& e) {
        thrown = true;
        CHECK(e.best_estimate() == doctest::Approx(5.0 / 18.0).epsilon(1e-2));
        CHECK(e.error_bound() > 0.0);
    }
    CHECK(thrown);
}
