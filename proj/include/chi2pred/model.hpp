#pragma once

#include <cstddef>
#include <vector>

#include "chi2pred/rng.hpp"

namespace chi2pred {

/// Dimensions of the sampling model: x is a p-variate normal with unknown
/// mean and precision eta, v is (1/eta) times a chi-squared variable with n1
/// degrees of freedom, and the predictand w is (1/eta) times a chi-squared
/// variable with n2 degrees of freedom.  Non-integer n1, n2 are allowed
/// (v and w are then gamma variables).
struct ModelConfig {
    int p = 1;
    double n1 = 1.0;
    double n2 = 1.0;

    void validate() const;
};

/// Half-degree-of-freedom shape parameters, the form in which every density
/// and risk formula is actually written: k = n1/2, l = n2/2, m = p/2 and
/// m_prime = p/2 - a for a shrinkage exponent a.
struct ShapeParams {
    double k;
    double l;
    double m;
    double m_prime;

    static ShapeParams from(const ModelConfig& config, double a);
};

/// Sufficient data extracted from one observation: the squared length of the
/// normal vector and the chi-squared component.
struct Observation {
    double x_norm_sq = 0.0;
    double v = 1.0;

    void validate() const;
};

/// Point in the reduced parameter space: the risk of every predictive
/// density here depends on (mu, eta) only through theta = eta * ||mu||^2.
struct SimulationPoint {
    double theta = 0.0;
    double eta = 1.0;

    void validate() const;
};

/// log p2(w | eta): log density of the predictand.
double log_p2(double w, double eta, const ModelConfig& config);

/// log p1(v | eta): log density of the observed chi-squared component.
double log_p1(double v, double eta, const ModelConfig& config);

struct DrawResult {
    Observation obs;
    double w;
};

/// One joint draw of (||x||^2, v, w) at the given parameter point:
/// eta*v ~ chi2(n1), eta*w ~ chi2(n2) and eta*||x||^2 ~ noncentral
/// chi2(p, theta), realized through the Poisson mixture z ~ Po(theta/2),
/// t | z ~ chi2(p + 2z).  The mean vector itself is never materialized.
/// Draw order is fixed (z, then ||x||^2, v, w) so that identical streams
/// yield identical observations.
DrawResult sample_observation(const SimulationPoint& point, const ModelConfig& config,
                              RandomStream& stream);

/// Sum of squares of a length-p vector; the only part of x the predictive
/// densities depend on.
double sufficient_reduce(const std::vector<double>& x, const ModelConfig& config);

} // namespace chi2pred
