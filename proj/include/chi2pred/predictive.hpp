#pragma once

#include <string>

#include "chi2pred/model.hpp"
#include "chi2pred/quadrature.hpp"

namespace chi2pred {

/// Hyperparameters of the hierarchical shrinkage prior: mixing exponent
/// b > 0 and shrinkage exponent a < p/2 (checked against the active model).
struct HyperParams {
    double b = 1.0;
    double a = 0.0;

    void validate(const ModelConfig& config) const;
};

/// Prior choice: the scale-reference prior (predictive density depends on v
/// only) or the hierarchical shrinkage prior with hyperparameters (b, a).
struct PriorSpec {
    enum class Kind { Reference, Hierarchical };

    Kind kind = Kind::Reference;
    HyperParams hp{};

    static PriorSpec reference() { return PriorSpec{Kind::Reference, {}}; }
    static PriorSpec hierarchical(double b, double a) {
        return PriorSpec{Kind::Hierarchical, HyperParams{b, a}};
    }
};

/// Which evaluator the dispatcher selected.
enum class EvalPath { Reference, Closed, B1, Half, General };

std::string eval_path_name(EvalPath path);

/// Log predictive density under the reference prior:
/// log[ v^(n1/2) w^(n2/2-1) (v+w)^(-(n1+n2)/2) / B(n1/2, n2/2) ].
/// Ignores obs.x_norm_sq entirely.
double ref_log_predictive(double w, const Observation& obs, const ModelConfig& config);

/// Log predictive density under the hierarchical prior for arbitrary (b, a):
/// ratio of two mixing integrals over the shrinkage weight, each computed by
/// beta-weighted tanh-sinh quadrature with the dominant factor pulled out.
double hier_log_predictive_general(double w, const Observation& obs, const HyperParams& hp,
                                   const ModelConfig& config,
                                   const QuadSettings& settings = {});

/// Specialization b = n1/2: the denominator integral collapses to a closed
/// form and only the numerator needs quadrature.
double hier_log_predictive_half(double w, const Observation& obs, double a,
                                const ModelConfig& config,
                                const QuadSettings& settings = {});

/// Specialization b = 1: reference density times a ratio of regularized
/// incomplete beta functions; no quadrature.  For extremely small incomplete-
/// beta arguments the ratio switches to its leading asymptotic form (see
/// kSmallQThreshold).
double hier_log_predictive_b1(double w, const Observation& obs, double a,
                              const ModelConfig& config);

/// Fully closed form for b = 1, a = p/2 - 1 (requires p >= 2).
double hier_log_predictive_closed(double w, const Observation& obs,
                                  const ModelConfig& config);

/// Below this value of the denominator beta argument q = t/(v+t), the b = 1
/// evaluator replaces both incomplete beta factors by their leading
/// asymptotics I_q(alpha, beta) ~ q^alpha / (alpha B(alpha, beta)); the
/// relative error of the switch is O(q).
inline constexpr double kSmallQThreshold = 1e-8;

/// Dispatcher: routes to the most specialized evaluator consistent with the
/// prior (closed, then b1, then half, then general).  Optionally reports the
/// chosen path.
double log_predictive(double w, const Observation& obs, const PriorSpec& prior,
                      const ModelConfig& config, const QuadSettings& settings = {},
                      EvalPath* path_out = nullptr);

} // namespace chi2pred
