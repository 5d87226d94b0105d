#include "chi2pred/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace chi2pred {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kLogPi = 1.1447298858494002;

// Beyond |t| = 12 the double-exponential weight has decayed below double
// range for every weight exponent pair used here (alpha, beta >= 1e-4).
constexpr double kTMax = 12.0;

// Node weights with a log-magnitude below this threshold underflow to zero
// once exponentiated, so the integrand is not evaluated there at all.  This
// also protects integrands that are undefined exactly at the endpoints.
constexpr double kLogWeightCutoff = -760.0;

// One tanh-sinh abscissa: x = (1 + tanh((pi/2) sinh t)) / 2 together with
// log x, log(1-x) and the log of the substitution jacobian pi cosh(t) x (1-x)
// split so that callers can fold weight exponents in before exponentiating.
struct Node {
    double x;
    double log_x;
    double log_1mx;
    double log_cosh_jac; // log(pi cosh t); the x(1-x) part lives in the logs
};

Node make_node(double t) {
    const double u = kHalfPi * std::sinh(t);
    const double au = std::abs(u);
    const double e = std::exp(-2.0 * au);
    const double lse = std::log1p(e);
    const double log_near = -lse;            // log of the endpoint-distant part
    const double log_far = -2.0 * au - lse;  // log of the endpoint-close part
    Node n;
    if (u >= 0.0) {
        n.log_x = log_near;
        n.log_1mx = log_far;
    } else {
        n.log_x = log_far;
        n.log_1mx = log_near;
    }
    n.x = std::exp(n.log_x);
    n.log_cosh_jac = kLogPi + std::log(std::cosh(t));
    return n;
}

} // namespace

void QuadSettings::validate() const {
    if (!(rel_tol > 0.0))
        throw std::domain_error("QuadSettings: rel_tol must be positive");
    if (!(abs_tol > 0.0))
        throw std::domain_error("QuadSettings: abs_tol must be positive");
    if (max_refinement_level < 1)
        throw std::domain_error("QuadSettings: max_refinement_level must be >= 1");
}

double integrate_01_weighted(const LogAwareIntegrand& f, double alpha, double beta,
                             const QuadSettings& settings) {
    settings.validate();
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::domain_error("integrate_01_weighted: weight exponents must be positive");

    // Contribution of the node at parameter t, already multiplied by the
    // combined weight x^alpha (1-x)^beta pi cosh(t) (jacobian absorbed).
    const auto term = [&](double t) -> double {
        const Node n = make_node(t);
        const double log_w = alpha * n.log_x + beta * n.log_1mx + n.log_cosh_jac;
        if (log_w < kLogWeightCutoff)
            return 0.0;
        return std::exp(log_w) * f(n.x, n.log_x, n.log_1mx);
    };

    // Level 0: trapezoid with step 1.  Each refinement halves the step and
    // adds only the new midpoint abscissas, in a fixed order, so the result
    // is bit-reproducible for identical settings.
    double h = 1.0;
    double sum = term(0.0);
    for (int j = 1; static_cast<double>(j) <= kTMax; ++j)
        sum += term(static_cast<double>(j)) + term(-static_cast<double>(j));
    double estimate = h * sum;

    double previous = estimate;
    double delta = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= settings.max_refinement_level; ++level) {
        h *= 0.5;
        double new_sum = 0.0;
        const long count = std::lround(kTMax / (2.0 * h));
        for (long j = 1; j <= count; ++j) {
            const double t = (2.0 * static_cast<double>(j) - 1.0) * h;
            new_sum += term(t) + term(-t);
        }
        estimate = 0.5 * previous + h * new_sum;
        delta = std::abs(estimate - previous);
        previous = estimate;
        const double tol =
            std::max(settings.abs_tol, settings.rel_tol * std::abs(estimate));
        if (level >= 2 && delta <= tol)
            return estimate;
    }
    throw quadrature_error(
        "integrate_01_weighted: tolerance not reached after " +
            std::to_string(settings.max_refinement_level) +
            " refinement levels (best estimate " + std::to_string(estimate) +
            ", error bound " + std::to_string(delta) + ")",
        estimate, delta);
}

double integrate_beta_weighted(const std::function<double(double)>& f, double alpha,
                               double beta, const QuadSettings& settings) {
    return integrate_01_weighted(
        [&f](double x, double, double) { return f(x); }, alpha, beta, settings);
}

} // namespace chi2pred
