#pragma once

// Independent reference values and cross-implementation oracles for the unit
// and acceptance suites.  Frozen constants were generated with mpmath at 50
// decimal digits; function oracles come from Boost.Math or from direct series
// evaluation, never from the code under test.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "chi2pred/model.hpp"
#include "chi2pred/predictive.hpp"
#include "chi2pred/rng.hpp"

namespace oracles {

// ---- frozen constants (mpmath, 50 decimal digits) ----
inline constexpr double kLn2 = 0.69314718055994530942;             // log(2)
inline constexpr double kLn24 = 3.1780538303479456197;             // log(24)
inline constexpr double kLnSqrtPi = 0.57236494292470008707;        // log(sqrt(pi))
inline constexpr double kDigammaOne = -0.57721566490153286061;     // digamma(1)
inline constexpr double kDigammaHalf = -1.9635100260214234794;     // digamma(1/2)
inline constexpr double kTwoLn2MinusOne = 0.38629436111989061883;  // 2 log(2) - 1
inline constexpr double kOneMinusEulerGamma = 0.42278433509846713939; // 1 - euler

inline double ibeta(double a, double b, double q) {
    return boost::math::ibeta(a, b, q);
}

inline double ibeta_inv(double a, double b, double omega) {
    return boost::math::ibeta_inv(a, b, omega);
}

inline double digamma(double x) {
    return boost::math::digamma(x);
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Gauss hypergeometric 2F1(a, b; c; z) for z <= 0, by the defining power
// series when it converges fast enough and otherwise through the Pfaff
// transformation z -> z/(z-1) in [0, 1).  Direct summation, independent of
// the library's Euler-integral evaluation.
inline double gauss_2f1_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int s = 0; s < 200000; ++s) {
        term *= (a + s) * (b + s) / ((c + s) * (1.0 + s)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && s > 3)
            return sum;
    }
    throw std::runtime_error("gauss_2f1_series: did not converge");
}

inline double gauss_2f1(double a, double b, double c, double z) {
    if (z > 0.0)
        throw std::domain_error("gauss_2f1: oracle only covers z <= 0");
    if (z == 0.0)
        return 1.0;
    if (z > -0.5)
        return gauss_2f1_series(a, b, c, z);
    const double u = z / (z - 1.0); // in (0, 1)
    // Pick the Pfaff variant whose transformed series converges faster at u.
    if (b >= a)
        return std::exp(-a * std::log1p(-z)) * gauss_2f1_series(a, c - b, c, u);
    return std::exp(-b * std::log1p(-z)) * gauss_2f1_series(c - a, b, c, u);
}

// Composite Simpson quadrature of integrand(s) over [lo, hi] with n intervals
// (n even).  Used on the log axis s = ln(w) where the integrands are smooth
// with exponentially decaying tails.
template <typename F>
double simpson(F&& integrand, double lo, double hi, int n) {
    if (n % 2 != 0)
        ++n;
    const double h = (hi - lo) / n;
    double sum = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i)
        sum += integrand(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Total mass of a predictive density given its log evaluator, integrating
// over w = e^s.  The [-45, 45] window leaves tail mass below 2e-10 for
// n1, n2 >= 1.
template <typename LogDensity>
double density_mass(LogDensity&& log_density, int intervals = 3000) {
    return simpson(
        [&](double s) {
            const double value = log_density(std::exp(s)) + s;
            return std::exp(value);
        },
        -45.0, 45.0, intervals);
}

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};

// Monte Carlo estimate of risk(hier) - risk(ref) with common random numbers:
// each replication evaluates both predictive densities on one shared draw, so
// the per-replication difference ln p_ref - ln p_hier has far lower variance
// than two independent risk estimates.
inline MeanSE mc_risk_difference(const chi2pred::PriorSpec& hier,
                                 const chi2pred::ModelConfig& config, double theta,
                                 std::int64_t reps, std::uint64_t seed,
                                 const chi2pred::QuadSettings& settings = {}) {
    const chi2pred::SimulationPoint point{theta, 1.0};
    std::vector<double> diffs(static_cast<std::size_t>(reps));
    for (std::int64_t i = 0; i < reps; ++i) {
        chi2pred::RandomStream stream =
            chi2pred::RandomStream::substream(seed, static_cast<std::uint64_t>(i));
        const chi2pred::DrawResult draw = chi2pred::sample_observation(point, config, stream);
        const double log_ref = chi2pred::ref_log_predictive(draw.w, draw.obs, config);
        const double log_hier =
            chi2pred::log_predictive(draw.w, draw.obs, hier, config, settings);
        diffs[static_cast<std::size_t>(i)] = log_ref - log_hier;
    }
    MeanSE out;
    double sum = 0.0;
    for (double d : diffs)
        sum += d;
    out.mean = sum / static_cast<double>(reps);
    double sq = 0.0;
    for (double d : diffs)
        sq += (d - out.mean) * (d - out.mean);
    out.se = std::sqrt(sq / (static_cast<double>(reps) - 1.0) / static_cast<double>(reps));
    return out;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

} // namespace oracles
