#pragma once

#include <string>

#include "chi2pred/model.hpp"
#include "chi2pred/predictive.hpp"
#include "chi2pred/quadrature.hpp"

namespace chi2pred {

/// Classification tolerance for the weak inequalities below: a condition with
/// margin >= -kMarginTol is treated as holding.
inline constexpr double kMarginTol = 1e-9;

/// Pair of constants (c1, c2) entering the sufficient conditions; their values
/// depend on whether n2 <= 2 or n2 > 2.
struct DominanceConstants {
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Outcome of a dominance check.
enum class DominanceHolds {
    ProvenDominates,      ///< a sufficient condition held
    ProvenFailsNecessary, ///< a necessary condition failed
    Inconclusive,         ///< no condition in scope was decisive
};

/// Identifier of the condition that produced the verdict.
enum class DominanceCondition { Thm1, Cor1i, Cor1ii, Cor2, Thm3, Thm4, None };

/// Result of evaluating one inequality: margin = RHS - LHS, so margin >= 0
/// means the inequality holds.
struct ConditionResult {
    bool holds = false;
    double margin = 0.0;
};

struct DominanceVerdict {
    DominanceHolds holds = DominanceHolds::Inconclusive;
    DominanceCondition fired_by = DominanceCondition::None;
    /// Slack of the decisive inequality (RHS - LHS); 0 for conditions that are
    /// pure applicability checks.
    double margin = 0.0;
    std::string note;
};

std::string dominance_holds_name(DominanceHolds holds);
std::string dominance_condition_name(DominanceCondition condition);

/// Constants (c1, c2) for the given configuration and shrinkage exponent a.
/// Requires a < p/2.
DominanceConstants constants(const ModelConfig& config, double a);

/// Integral-form sufficient condition for b = n1/2: compares a digamma
/// difference against a one-dimensional integral.  margin = RHS - LHS.
ConditionResult thm1_condition(const ModelConfig& config, double a,
                               const QuadSettings& settings = {});

/// Closed-form sufficient condition implying thm1_condition (no quadrature).
ConditionResult cor1_i_condition(const ModelConfig& config, double a);

/// Existence screen: when the strict inequality holds, dominance is guaranteed
/// for every a in some left-neighborhood of p/2 (the neighborhood itself is not
/// computed, so no a argument is taken).  holds=true means "applies".
ConditionResult cor1_ii_condition(const ModelConfig& config);

/// Decisive verdict for n2 = 2 and b = n1/2, where the integral condition is
/// both necessary and sufficient.  Requires n2 == 2.
DominanceVerdict cor2_verdict(const ModelConfig& config, double a,
                              const QuadSettings& settings = {});

/// Applicability of the b = 1 sufficient condition: 0 <= a < p/2 and n1 > 2.
bool thm3_applicable(const ModelConfig& config, double a);

/// Applicability of the closed-form special case b = 1, a = p/2 - 1 (requires
/// p >= 2); dominance always holds there.
bool thm4_applicable(const ModelConfig& config, double a);

/// Runs the checks applicable to the given hierarchical prior, most specialized
/// first, and reports the first decisive one.  Throws std::invalid_argument for
/// a reference prior.
DominanceVerdict dominance_report(const PriorSpec& prior, const ModelConfig& config,
                                  const QuadSettings& settings = {});

} // namespace chi2pred
