#include "chi2pred/dominance.hpp"

#include <cmath>
#include <stdexcept>

#include "chi2pred/specfun.hpp"

namespace chi2pred {

namespace {

constexpr double kExactTol = 1e-12;

// Integrand of the criterion integral with the 1/rho singularity removed:
// (1 - (1 + c1*rho)^-(k+l)) / rho, continuous at rho = 0 with value (k+l)*c1.
double criterion_integrand(double rho, double c1, double kl) {
    if (rho < 1e-300)
        return kl * c1;
    return -std::expm1(-kl * std::log1p(c1 * rho)) / rho;
}

// RHS of the integral criterion: the criterion integrand averaged against a
// Beta(1, k+l+m) weight (up to normalization, handled by the caller's c2).
double criterion_integral(const ShapeParams& sp, const DominanceConstants& dc,
                          const QuadSettings& settings) {
    const double kl = sp.k + sp.l;
    return integrate_beta_weighted(
        [&dc, kl](double rho) { return criterion_integrand(rho, dc.c1, kl); }, 1.0,
        sp.k + sp.l + sp.m, settings);
}

} // namespace

std::string dominance_holds_name(DominanceHolds holds) {
    switch (holds) {
    case DominanceHolds::ProvenDominates: return "ProvenDominates";
    case DominanceHolds::ProvenFailsNecessary: return "ProvenFailsNecessary";
    case DominanceHolds::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

std::string dominance_condition_name(DominanceCondition condition) {
    switch (condition) {
    case DominanceCondition::Thm1: return "Thm1";
    case DominanceCondition::Cor1i: return "Cor1i";
    case DominanceCondition::Cor1ii: return "Cor1ii";
    case DominanceCondition::Cor2: return "Cor2";
    case DominanceCondition::Thm3: return "Thm3";
    case DominanceCondition::Thm4: return "Thm4";
    case DominanceCondition::None: return "None";
    }
    return "unknown";
}

DominanceConstants constants(const ModelConfig& config, double a) {
    config.validate();
    if (!std::isfinite(a) || !(a < 0.5 * config.p))
        throw std::domain_error("constants: requires a < p/2 (a=" + std::to_string(a) +
                                ", p=" + std::to_string(config.p) + ")");
    const auto sp = ShapeParams::from(config, a);
    DominanceConstants dc;
    if (config.n2 <= 2.0) {
        dc.c1 = std::expm1(specfun::log_gamma(sp.k) + specfun::log_gamma(sp.k + sp.l + sp.m_prime) -
                           specfun::log_gamma(sp.k + sp.l) - specfun::log_gamma(sp.k + sp.m_prime));
        dc.c2 = 1.0;
    } else {
        dc.c1 = sp.m_prime / (sp.k + sp.l - 1.0);
        dc.c2 = sp.l;
    }
    return dc;
}

ConditionResult thm1_condition(const ModelConfig& config, double a,
                               const QuadSettings& settings) {
    const auto dc = constants(config, a);
    const auto sp = ShapeParams::from(config, a);
    const double lhs =
        (sp.m_prime / dc.c2) * specfun::digamma_diff(sp.k + sp.l + sp.m, sp.k + sp.m);
    const double rhs = criterion_integral(sp, dc, settings);
    const double margin = rhs - lhs;
    return {margin >= -kMarginTol, margin};
}

ConditionResult cor1_i_condition(const ModelConfig& config, double a) {
    const auto dc = constants(config, a);
    const auto sp = ShapeParams::from(config, a);
    const double klm = sp.k + sp.l + sp.m;
    const double lhs = specfun::digamma_diff(klm, sp.k + sp.m);
    const double bracket = -std::expm1(-(sp.k + sp.l) * std::log1p(dc.c1 / (klm + 1.0)));
    const double rhs = (dc.c2 / sp.m_prime) * ((klm + 1.0) / klm) * bracket;
    const double margin = rhs - lhs;
    return {margin >= -kMarginTol, margin};
}

ConditionResult cor1_ii_condition(const ModelConfig& config) {
    config.validate();
    const auto sp = ShapeParams::from(config, 0.0);
    const double klm = sp.k + sp.l + sp.m;
    const double lhs = specfun::digamma_diff(klm, sp.k + sp.m);
    const double c2 = (config.n2 <= 2.0) ? 1.0 : sp.l;
    const double factor = (config.n2 <= 2.0) ? specfun::digamma_diff(sp.k + sp.l, sp.k)
                                             : 1.0 / (sp.k + sp.l - 1.0);
    const double rhs = ((sp.k + sp.l) * c2 / klm) * factor;
    const double margin = rhs - lhs;
    // Strict inequality: only a positive margin counts.
    return {margin > 0.0, margin};
}

DominanceVerdict cor2_verdict(const ModelConfig& config, double a,
                              const QuadSettings& settings) {
    config.validate();
    if (config.n2 != 2.0)
        throw std::domain_error("cor2_verdict: requires n2 == 2 (got " +
                                std::to_string(config.n2) + ")");
    DominanceVerdict verdict;
    verdict.fired_by = DominanceCondition::Cor2;
    if (config.n1 == 2.0) {
        // The criterion reduces to a >= 0; the slack in a is reported as margin.
        if (!std::isfinite(a) || !(a < 0.5 * config.p))
            throw std::domain_error("cor2_verdict: requires a < p/2 (a=" +
                                    std::to_string(a) + ")");
        verdict.holds = (a >= 0.0) ? DominanceHolds::ProvenDominates
                                   : DominanceHolds::ProvenFailsNecessary;
        verdict.margin = a;
        verdict.note = "n1 = 2, n2 = 2: criterion reduces to a >= 0";
        return verdict;
    }
    const auto cond = thm1_condition(config, a, settings);
    verdict.holds =
        cond.holds ? DominanceHolds::ProvenDominates : DominanceHolds::ProvenFailsNecessary;
    verdict.margin = cond.margin;
    verdict.note = "n2 = 2: integral criterion is necessary and sufficient";
    return verdict;
}

bool thm3_applicable(const ModelConfig& config, double a) {
    config.validate();
    return std::isfinite(a) && a >= 0.0 && a < 0.5 * config.p && config.n1 > 2.0;
}

bool thm4_applicable(const ModelConfig& config, double a) {
    config.validate();
    return config.p >= 2 && std::isfinite(a) &&
           std::abs(a - (0.5 * config.p - 1.0)) <= kExactTol;
}

DominanceVerdict dominance_report(const PriorSpec& prior, const ModelConfig& config,
                                  const QuadSettings& settings) {
    if (prior.kind != PriorSpec::Kind::Hierarchical)
        throw std::invalid_argument(
            "dominance_report: dominance checks apply to hierarchical priors only");
    prior.hp.validate(config);
    const double b = prior.hp.b;
    const double a = prior.hp.a;
    const bool b_is_one = std::abs(b - 1.0) <= kExactTol;
    const bool b_is_half_n1 = std::abs(b - 0.5 * config.n1) <= kExactTol;

    DominanceVerdict verdict;
    if (b_is_one) {
        if (thm4_applicable(config, a)) {
            verdict.holds = DominanceHolds::ProvenDominates;
            verdict.fired_by = DominanceCondition::Thm4;
            verdict.margin = 0.0;
            verdict.note = "closed-form special case a = p/2 - 1";
            return verdict;
        }
        if (thm3_applicable(config, a)) {
            verdict.holds = DominanceHolds::ProvenDominates;
            verdict.fired_by = DominanceCondition::Thm3;
            verdict.margin = 0.0;
            verdict.note = "b = 1 sufficient condition (0 <= a < p/2, n1 > 2)";
            return verdict;
        }
    }
    if (b_is_half_n1) {
        if (config.n2 == 2.0)
            return cor2_verdict(config, a, settings);
        const auto cor1i = cor1_i_condition(config, a);
        if (cor1i.holds) {
            verdict.holds = DominanceHolds::ProvenDominates;
            verdict.fired_by = DominanceCondition::Cor1i;
            verdict.margin = cor1i.margin;
            return verdict;
        }
        const auto thm1 = thm1_condition(config, a, settings);
        if (thm1.holds) {
            verdict.holds = DominanceHolds::ProvenDominates;
            verdict.fired_by = DominanceCondition::Thm1;
            verdict.margin = thm1.margin;
            return verdict;
        }
        verdict.holds = DominanceHolds::Inconclusive;
        verdict.fired_by = DominanceCondition::None;
        verdict.margin = thm1.margin;
        verdict.note = "sufficient conditions for b = n1/2 not met (n2 > 2: not decisive)";
        return verdict;
    }
    if (!b_is_one) {
        verdict.holds = DominanceHolds::Inconclusive;
        verdict.fired_by = DominanceCondition::None;
        verdict.margin = 0.0;
        verdict.note = "no condition covers b outside {1, n1/2}";
        return verdict;
    }
    verdict.holds = DominanceHolds::Inconclusive;
    verdict.fired_by = DominanceCondition::None;
    verdict.margin = 0.0;
    verdict.note = "b = 1 conditions require a >= 0 (and n1 > 2 unless a = p/2 - 1)";
    return verdict;
}

} // namespace chi2pred
