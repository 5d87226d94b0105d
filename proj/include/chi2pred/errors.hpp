#pragma once

#include <stdexcept>
#include <string>

namespace chi2pred {

/// Thrown when an adaptive integration does not reach the requested tolerance
/// within the allowed refinement depth.  Carries the best available estimate
/// together with the last observed error bound so callers can decide whether
/// the partial result is still usable.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Thrown when an iterative root solve fails to bracket or refine its target.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chi2pred
