#include "chi2pred/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chi2pred/specfun.hpp"

namespace chi2pred {

void ModelConfig::validate() const {
    if (p < 1)
        throw std::domain_error("ModelConfig: p must be a positive integer (got " +
                                std::to_string(p) + ")");
    if (!(n1 > 0.0) || !std::isfinite(n1))
        throw std::domain_error("ModelConfig: n1 must be positive (got " +
                                std::to_string(n1) + ")");
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::domain_error("ModelConfig: n2 must be positive (got " +
                                std::to_string(n2) + ")");
}

ShapeParams ShapeParams::from(const ModelConfig& config, double a) {
    config.validate();
    return ShapeParams{0.5 * config.n1, 0.5 * config.n2, 0.5 * config.p,
                       0.5 * config.p - a};
}

void Observation::validate() const {
    if (!(x_norm_sq >= 0.0) || !std::isfinite(x_norm_sq))
        throw std::domain_error("Observation: x_norm_sq must be nonnegative (got " +
                                std::to_string(x_norm_sq) + ")");
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error("Observation: v must be positive (got " +
                                std::to_string(v) + ")");
}

void SimulationPoint::validate() const {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::domain_error("SimulationPoint: theta must be nonnegative (got " +
                                std::to_string(theta) + ")");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::domain_error("SimulationPoint: eta must be positive (got " +
                                std::to_string(eta) + ")");
}

namespace {

// Shared chi-squared-family log density: (nu/2) log(eta/2) - lgamma(nu/2)
// + (nu/2 - 1) log x - eta x / 2.
double log_chi2_scaled(double x, double eta, double nu, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) + ": argument must be positive (got " +
                                std::to_string(x) + ")");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::domain_error(std::string(fn) + ": eta must be positive (got " +
                                std::to_string(eta) + ")");
    const double half_nu = 0.5 * nu;
    return half_nu * std::log(0.5 * eta) - specfun::log_gamma(half_nu) +
           (half_nu - 1.0) * std::log(x) - 0.5 * eta * x;
}

} // namespace

double log_p2(double w, double eta, const ModelConfig& config) {
    config.validate();
    return log_chi2_scaled(w, eta, config.n2, "log_p2");
}

double log_p1(double v, double eta, const ModelConfig& config) {
    config.validate();
    return log_chi2_scaled(v, eta, config.n1, "log_p1");
}

DrawResult sample_observation(const SimulationPoint& point, const ModelConfig& config,
                              RandomStream& stream) {
    config.validate();
    point.validate();
    const std::uint64_t z = stream.poisson(0.5 * point.theta);
    const double t = stream.chi_squared(static_cast<double>(config.p) + 2.0 * z);
    const double v = stream.chi_squared(config.n1);
    const double w = stream.chi_squared(config.n2);
    DrawResult result;
    result.obs.x_norm_sq = t / point.eta;
    result.obs.v = v / point.eta;
    result.w = w / point.eta;
    return result;
}

double sufficient_reduce(const std::vector<double>& x, const ModelConfig& config) {
    config.validate();
    if (x.size() != static_cast<std::size_t>(config.p))
        throw std::invalid_argument("sufficient_reduce: expected a vector of length " +
                                    std::to_string(config.p) + ", got " +
                                    std::to_string(x.size()));
    double sum = 0.0;
    for (const double xi : x)
        sum += xi * xi;
    return sum;
}

} // namespace chi2pred
