#include "chi2pred/predictive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chi2pred/specfun.hpp"

namespace chi2pred {

namespace {

constexpr double kDispatchTol = 1e-12;

void check_w(double w, const char* fn) {
    if (!(w > 0.0) || !std::isfinite(w))
        throw std::domain_error(std::string(fn) + ": w must be positive (got " +
                                std::to_string(w) + ")");
}

void check_a(double a, const ModelConfig& config, const char* fn) {
    if (!std::isfinite(a) || !(a < 0.5 * config.p))
        throw std::domain_error(std::string(fn) + ": requires a < p/2 (a=" +
                                std::to_string(a) + ", p=" + std::to_string(config.p) + ")");
}

// ln of  integral_0^1 (1-g)^(b-1) g^(mp-1) (s + g t)^(-power) dg,  the mixing
// integral shared by numerator and denominator of the general form.  The raw
// integrand concentrates in a layer of width ~ s/t near g = 0 when t >> s, so
// it is evaluated through the equivalent form (substituting g = x/(c(1-x))
// with c = t/s, then rescaling x to the unit interval)
//
//   s^(-power) (1+c)^(-mp) integral_0^1 y^(mp-1) (1-y)^(b-1) (1-qy)^(power-mp-b) dy,
//
// q = c/(1+c), whose integrand stays smooth on (0,1) uniformly in t.
double log_mix_integral(double s, double power, double b, double m_prime, double t,
                        const QuadSettings& settings) {
    if (t == 0.0)
        return specfun::log_beta(m_prime, b) - power * std::log(s);
    const double c = t / s;
    const double log1p_c = std::log1p(c);
    const double expo = power - m_prime - b;
    const double integral = integrate_01_weighted(
        [c, log1p_c, expo](double y, double /*log_y*/, double log_1my) {
            // log(1 - qy) = log1p(c(1-y)) - log1p(c), stable for q near 1.
            return std::exp(expo * (std::log1p(c * std::exp(log_1my)) - log1p_c));
        },
        m_prime, b, settings);
    return std::log(integral) - m_prime * log1p_c - power * std::log(s);
}

} // namespace

void HyperParams::validate(const ModelConfig& config) const {
    config.validate();
    if (!(b > 0.0) || !std::isfinite(b))
        throw std::domain_error("HyperParams: b must be positive (got " +
                                std::to_string(b) + ")");
    check_a(a, config, "HyperParams");
}

std::string eval_path_name(EvalPath path) {
    switch (path) {
    case EvalPath::Reference: return "reference";
    case EvalPath::Closed: return "closed";
    case EvalPath::B1: return "b1";
    case EvalPath::Half: return "half";
    case EvalPath::General: return "general";
    }
    return "unknown";
}

double ref_log_predictive(double w, const Observation& obs, const ModelConfig& config) {
    config.validate();
    obs.validate();
    check_w(w, "ref_log_predictive");
    const auto sp = ShapeParams::from(config, 0.0);
    return -specfun::log_beta(sp.k, sp.l) + sp.k * std::log(obs.v) +
           (sp.l - 1.0) * std::log(w) - (sp.k + sp.l) * std::log(obs.v + w);
}

double hier_log_predictive_general(double w, const Observation& obs, const HyperParams& hp,
                                   const ModelConfig& config, const QuadSettings& settings) {
    hp.validate(config);
    obs.validate();
    check_w(w, "hier_log_predictive_general");
    const auto sp = ShapeParams::from(config, hp.a);
    const double t = obs.x_norm_sq;
    const double log_num =
        log_mix_integral(obs.v + w, sp.k + sp.l + sp.m_prime, hp.b, sp.m_prime, t, settings);
    const double log_den =
        log_mix_integral(obs.v, sp.k + sp.m_prime, hp.b, sp.m_prime, t, settings);
    return (sp.l - 1.0) * std::log(w) - specfun::log_beta(sp.k + sp.m_prime, sp.l) +
           log_num - log_den;
}

double hier_log_predictive_half(double w, const Observation& obs, double a,
                                const ModelConfig& config, const QuadSettings& settings) {
    config.validate();
    obs.validate();
    check_w(w, "hier_log_predictive_half");
    check_a(a, config, "hier_log_predictive_half");
    const auto sp = ShapeParams::from(config, a);
    const double t = obs.x_norm_sq;
    const double c = t / (obs.v + w + t); // in [0, 1)
    const double log_smooth_integral =
        (t == 0.0)
            ? specfun::log_beta(sp.m_prime, sp.k)
            : std::log(integrate_beta_weighted(
                  [&sp, c](double g) { return std::exp(sp.l * std::log1p(-c * g)); },
                  sp.m_prime, sp.k, settings));
    const double log_num = -(sp.k + sp.l) * std::log(obs.v + w) -
                           sp.m_prime * std::log(obs.v + w + t) + log_smooth_integral;
    const double log_den = specfun::log_beta(sp.k, sp.m_prime) - sp.k * std::log(obs.v) -
                           sp.m_prime * std::log(obs.v + t);
    return (sp.l - 1.0) * std::log(w) - specfun::log_beta(sp.k + sp.m_prime, sp.l) +
           log_num - log_den;
}

double hier_log_predictive_b1(double w, const Observation& obs, double a,
                              const ModelConfig& config) {
    config.validate();
    obs.validate();
    check_w(w, "hier_log_predictive_b1");
    check_a(a, config, "hier_log_predictive_b1");
    const auto sp = ShapeParams::from(config, a);
    const double t = obs.x_norm_sq;
    const double q_den = t / (obs.v + t);
    double correction;
    if (q_den < kSmallQThreshold) {
        // Leading asymptotics of both incomplete beta factors; their q^alpha
        // terms combine into the exactly computable ratio (v+t)/(v+w+t).
        correction = sp.m_prime * (std::log(obs.v + t) - std::log(obs.v + w + t)) +
                     specfun::log_beta(sp.m_prime, sp.k) -
                     specfun::log_beta(sp.m_prime, sp.k + sp.l);
    } else {
        const double q_num = t / (obs.v + w + t);
        correction = specfun::log_reg_inc_beta(q_num, sp.m_prime, sp.k + sp.l) -
                     specfun::log_reg_inc_beta(q_den, sp.m_prime, sp.k);
    }
    return ref_log_predictive(w, obs, config) + correction;
}

double hier_log_predictive_closed(double w, const Observation& obs,
                                  const ModelConfig& config) {
    config.validate();
    obs.validate();
    check_w(w, "hier_log_predictive_closed");
    if (config.p < 2)
        throw std::domain_error("hier_log_predictive_closed: requires p >= 2 (got " +
                                std::to_string(config.p) + ")");
    const auto sp = ShapeParams::from(config, 0.0);
    const double t = obs.x_norm_sq;
    double correction;
    if (t == 0.0) {
        // First-order limit of both brackets as t -> 0.
        correction = std::log((sp.k + sp.l) * obs.v) - std::log(sp.k * (obs.v + w));
    } else {
        const double num_bracket = -std::expm1(-(sp.k + sp.l) * std::log1p(t / (obs.v + w)));
        const double den_bracket = -std::expm1(-sp.k * std::log1p(t / obs.v));
        correction = std::log(num_bracket) - std::log(den_bracket);
    }
    return ref_log_predictive(w, obs, config) + correction;
}

double log_predictive(double w, const Observation& obs, const PriorSpec& prior,
                      const ModelConfig& config, const QuadSettings& settings,
                      EvalPath* path_out) {
    const auto set_path = [path_out](EvalPath p) {
        if (path_out != nullptr)
            *path_out = p;
    };
    if (prior.kind == PriorSpec::Kind::Reference) {
        set_path(EvalPath::Reference);
        return ref_log_predictive(w, obs, config);
    }
    prior.hp.validate(config);
    const double b = prior.hp.b;
    const double a = prior.hp.a;
    if (std::abs(b - 1.0) <= kDispatchTol) {
        if (config.p >= 2 && std::abs(a - (0.5 * config.p - 1.0)) <= kDispatchTol) {
            set_path(EvalPath::Closed);
            return hier_log_predictive_closed(w, obs, config);
        }
        set_path(EvalPath::B1);
        return hier_log_predictive_b1(w, obs, a, config);
    }
    if (std::abs(b - 0.5 * config.n1) <= kDispatchTol) {
        set_path(EvalPath::Half);
        return hier_log_predictive_half(w, obs, a, config, settings);
    }
    set_path(EvalPath::General);
    return hier_log_predictive_general(w, obs, prior.hp, config, settings);
}

} // namespace chi2pred
