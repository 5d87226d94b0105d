#pragma once

#include <functional>

#include "chi2pred/errors.hpp"

namespace chi2pred {

/// Tolerances and depth limit for the tanh-sinh integrator.
struct QuadSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_refinement_level = 12;

    void validate() const;
};

/// Integrand for the unit interval that receives, alongside the abscissa x,
/// the precomputed values of log(x) and log(1-x).  The logs stay accurate
/// even where x itself rounds to 0 or 1 in double precision, which lets
/// integrands evaluate expressions such as x/(1-x) without cancellation.
using LogAwareIntegrand = std::function<double(double x, double log_x, double log_1mx)>;

/// Computes  integral_0^1 x^(alpha-1) (1-x)^(beta-1) f(x, log x, log(1-x)) dx
/// by tanh-sinh (double-exponential) quadrature.  The beta weight is folded
/// into the node weights in log space, so integrable endpoint singularities
/// of exactly this form cost nothing; f itself should stay bounded or at
/// worst logarithmically singular at the endpoints.
///
/// Deterministic for fixed settings.  Throws quadrature_error if successive
/// refinement levels fail to agree within the requested tolerance.
double integrate_01_weighted(const LogAwareIntegrand& f, double alpha, double beta,
                             const QuadSettings& settings = {});

/// Computes  integral_0^1 x^(alpha-1) (1-x)^(beta-1) f(x) dx  for a bounded
/// continuous f on (0,1); convenience wrapper over integrate_01_weighted.
double integrate_beta_weighted(const std::function<double(double)>& f, double alpha,
                               double beta, const QuadSettings& settings = {});

} // namespace chi2pred
