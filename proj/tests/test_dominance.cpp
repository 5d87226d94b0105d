#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "chi2pred/dominance.hpp"

using chi2pred::ConditionResult;
using chi2pred::DominanceCondition;
using chi2pred::DominanceHolds;
using chi2pred::DominanceVerdict;
using chi2pred::ModelConfig;
using chi2pred::PriorSpec;

TEST_CASE("condition constants") {
    // n2 <= 2 branch: c1 from a gamma-ratio expression, c2 = 1.
    const auto c_small = chi2pred::constants(ModelConfig{2, 2.0, 2.0}, 0.0);
    // k = l = m' = 1: exp(lnG(1)+lnG(3)-lnG(2)-lnG(2)) - 1 = 2 - 1 = 1.
    CHECK(c_small.c1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c_small.c2 == doctest::Approx(1.0).epsilon(1e-14));

    // n2 > 2 branch: c1 = m'/(k+l-1), c2 = l.
    const auto c_big = chi2pred::constants(ModelConfig{14, 3.0, 5.0}, 6.0);
    CHECK(c_big.c1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(c_big.c2 == doctest::Approx(2.5).epsilon(1e-14));

    const auto c_edge = chi2pred::constants(ModelConfig{6, 5.0, 2.0}, 1.0);
    CHECK(c_edge.c2 == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(chi2pred::constants(ModelConfig{4, 2.0, 2.0}, 2.0), std::domain_error);
}

TEST_CASE("integral condition is exactly tight at n1 = n2 = 2, a = 0") {
    for (int p : {2, 4, 8}) {
        const auto res = chi2pred::thm1_condition(ModelConfig{p, 2.0, 2.0}, 0.0);
        CAPTURE(p);
        CHECK(std::abs(res.margin) <= 1e-9);
        CHECK(res.holds); // margin >= -kMarginTol counts as holding
    }
    // Positive shrinkage exponent gives strictly positive slack there.
    const auto strict = chi2pred::thm1_condition(ModelConfig{2, 2.0, 2.0}, 0.5);
    CHECK(strict.holds);
    CHECK(strict.margin > 1e-3);
}

TEST_CASE("integral condition on the simulation configurations") {
    // At a = 6 (p = 14) the condition holds for all four (n1, n2) pairs used in
    // the risk experiment; at a = 0 it fails for all four.
    for (double n1 : {3.0, 5.0}) {
        for (double n2 : {3.0, 5.0}) {
            const ModelConfig config{14, n1, n2};
            CAPTURE(n1);
            CAPTURE(n2);
            CHECK(chi2pred::thm1_condition(config, 6.0).holds);
            CHECK_FALSE(chi2pred::thm1_condition(config, 0.0).holds);
        }
    }
}

TEST_CASE("closed-form bound on the simulation configurations") {
    for (double n1 : {3.0, 5.0}) {
        for (double n2 : {3.0, 5.0}) {
            const ModelConfig config{14, n1, n2};
            CAPTURE(n1);
            CAPTURE(n2);
            CHECK(chi2pred::cor1_i_condition(config, 6.0).holds);
            CHECK_FALSE(chi2pred::cor1_i_condition(config, 0.0).holds);
        }
    }
}

TEST_CASE("closed-form bound implies the integral condition") {
    std::mt19937_64 gen(424242);
    int closed_holds = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 1 + static_cast<int>(gen() % 16);
        const ModelConfig config{p, oracles::uniform_in(gen, 0.6, 10.0),
                                 oracles::uniform_in(gen, 0.6, 10.0)};
        const double a = 0.5 * p - oracles::uniform_in(gen, 0.05, 6.0);
        const auto closed = chi2pred::cor1_i_condition(config, a);
        CAPTURE(trial);
        CAPTURE(p);
        CAPTURE(a);
        if (closed.holds) {
            ++closed_holds;
            const auto integral = chi2pred::thm1_condition(config, a);
            CHECK(integral.holds);
            // The integral bound is the sharper one.  Its margin is scaled by
            // m'/c2 relative to the closed-form margin.
            const auto dc = chi2pred::constants(config, a);
            const double m_prime = 0.5 * p - a;
            CHECK(integral.margin >= (m_prime / dc.c2) * closed.margin - 1e-9);
        }
    }
    CHECK(closed_holds > 50); // the sweep exercises both outcomes
}

TEST_CASE("existence screen is consistent with the integral condition near p/2") {
    // n2 <= 2 branch and n2 > 2 branch, both applying.
    for (const auto& config :
         {ModelConfig{14, 3.0, 2.0}, ModelConfig{14, 3.0, 5.0}, ModelConfig{14, 5.0, 5.0}}) {
        const auto screen = chi2pred::cor1_ii_condition(config);
        CAPTURE(config.n1);
        CAPTURE(config.n2);
        CHECK(screen.holds);
        // Just below the a -> p/2 endpoint the integral condition must hold.
        const auto near = chi2pred::thm1_condition(config, 0.5 * config.p - 1e-4);
        CHECK(near.holds);
    }
    // Configurations where the screen strictly fails.
    for (const auto& config : {ModelConfig{2, 30.0, 3.0}, ModelConfig{8, 5.0, 6.0}}) {
        const auto fails = chi2pred::cor1_ii_condition(config);
        CAPTURE(config.n1);
        CAPTURE(config.n2);
        CHECK_FALSE(fails.holds);
        CHECK(fails.margin < 0.0);
    }
}

TEST_CASE("decisive rule at n2 = 2") {
    // n1 = 2 as well: dominance holds exactly when a >= 0, with margin a.
    for (int p : {2, 6, 14}) {
        CAPTURE(p);
        const ModelConfig config{p, 2.0, 2.0};
        const auto pos = chi2pred::cor2_verdict(config, 0.5);
        CHECK(pos.holds == DominanceHolds::ProvenDominates);
        CHECK(pos.fired_by == DominanceCondition::Cor2);
        CHECK(pos.margin == doctest::Approx(0.5).epsilon(1e-14));

        const auto boundary = chi2pred::cor2_verdict(config, 0.0);
        CHECK(boundary.holds == DominanceHolds::ProvenDominates);
        CHECK(boundary.margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

        const auto neg = chi2pred::cor2_verdict(config, -0.5);
        CHECK(neg.holds == DominanceHolds::ProvenFailsNecessary);
        CHECK(neg.margin == doctest::Approx(-0.5).epsilon(1e-14));
    }

    // n1 > 2: the verdict must agree in sign with the integral condition.
    for (double a : {-1.0, 0.0, 1.5, 6.0}) {
        const ModelConfig config{14, 5.0, 2.0};
        const auto verdict = chi2pred::cor2_verdict(config, a);
        const auto integral = chi2pred::thm1_condition(config, a);
        CAPTURE(a);
        CHECK(verdict.margin == doctest::Approx(integral.margin).scale(1.0).epsilon(1e-12));
        if (integral.holds)
            CHECK(verdict.holds == DominanceHolds::ProvenDominates);
        else
            CHECK(verdict.holds == DominanceHolds::ProvenFailsNecessary);
    }

    CHECK_THROWS_AS(chi2pred::cor2_verdict(ModelConfig{4, 3.0, 4.0}, 0.0), std::domain_error);
}

TEST_CASE("applicability predicates for the b = 1 conditions") {
    CHECK(chi2pred::thm3_applicable(ModelConfig{14, 3.0, 3.0}, 0.0));
    CHECK(chi2pred::thm3_applicable(ModelConfig{14, 3.0, 3.0}, 6.9));
    CHECK_FALSE(chi2pred::thm3_applicable(ModelConfig{14, 3.0, 3.0}, -0.1));
    CHECK_FALSE(chi2pred::thm3_applicable(ModelConfig{14, 3.0, 3.0}, 7.0));
    CHECK_FALSE(chi2pred::thm3_applicable(ModelConfig{14, 2.0, 3.0}, 1.0)); // n1 = 2

    CHECK(chi2pred::thm4_applicable(ModelConfig{14, 3.0, 3.0}, 6.0));
    CHECK(chi2pred::thm4_applicable(ModelConfig{14, 3.0, 3.0}, 6.0 + 1e-13));
    CHECK_FALSE(chi2pred::thm4_applicable(ModelConfig{14, 3.0, 3.0}, 6.0 + 1e-10));
    CHECK_FALSE(chi2pred::thm4_applicable(ModelConfig{14, 3.0, 3.0}, 0.0));
    CHECK_FALSE(chi2pred::thm4_applicable(ModelConfig{1, 3.0, 3.0}, -0.5)); // p = 1
    CHECK(chi2pred::thm4_applicable(ModelConfig{2, 2.0, 2.0}, 0.0));
}

TEST_CASE("report for b = 1 priors") {
    const ModelConfig config{14, 3.0, 3.0};

    const auto special = chi2pred::dominance_report(PriorSpec::hierarchical(1.0, 6.0), config);
    CHECK(special.holds == DominanceHolds::ProvenDominates);
    CHECK(special.fired_by == DominanceCondition::Thm4);

    const auto generic = chi2pred::dominance_report(PriorSpec::hierarchical(1.0, 0.0), config);
    CHECK(generic.holds == DominanceHolds::ProvenDominates);
    CHECK(generic.fired_by == DominanceCondition::Thm3);

    // Negative a: no b = 1 condition is in scope.
    const auto neg = chi2pred::dominance_report(PriorSpec::hierarchical(1.0, -1.0), config);
    CHECK(neg.holds == DominanceHolds::Inconclusive);
    CHECK(neg.fired_by == DominanceCondition::None);

    // n1 = 2 removes the generic condition but not the special case a = p/2-1.
    const ModelConfig n1two{14, 2.0, 3.0};
    const auto two_special =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.0, 6.0), n1two);
    CHECK(two_special.fired_by == DominanceCondition::Thm4);
    const auto two_generic =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.0, 0.0), n1two);
    CHECK(two_generic.holds == DominanceHolds::Inconclusive);
}

TEST_CASE("report for b = n1/2 priors") {
    // n2 > 2, favorable a: the closed-form bound fires first.
    const auto fav =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.5, 6.0), ModelConfig{14, 3.0, 3.0});
    CHECK(fav.holds == DominanceHolds::ProvenDominates);
    CHECK(fav.fired_by == DominanceCondition::Cor1i);
    CHECK(fav.margin > 0.0);

    // n2 > 2, a = 0: nothing decisive; margin reports the integral-condition slack.
    const auto flat =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.5, 0.0), ModelConfig{14, 3.0, 3.0});
    CHECK(flat.holds == DominanceHolds::Inconclusive);
    CHECK(flat.fired_by == DominanceCondition::None);
    CHECK(flat.margin ==
          doctest::Approx(chi2pred::thm1_condition(ModelConfig{14, 3.0, 3.0}, 0.0).margin)
              .epsilon(1e-12));

    // A case decided by the integral condition but not the closed-form bound.
    {
        std::mt19937_64 gen(99);
        bool found = false;
        for (int trial = 0; trial < 4000 && !found; ++trial) {
            const int p = 2 + static_cast<int>(gen() % 14);
            const ModelConfig config{p, oracles::uniform_in(gen, 2.2, 8.0),
                                     oracles::uniform_in(gen, 2.2, 8.0)};
            const double a = 0.5 * p - oracles::uniform_in(gen, 0.1, 5.0);
            if (!chi2pred::cor1_i_condition(config, a).holds &&
                chi2pred::thm1_condition(config, a).holds) {
                found = true;
                const auto verdict =
                    chi2pred::dominance_report(PriorSpec::hierarchical(0.5 * config.n1, a), config);
                CHECK(verdict.holds == DominanceHolds::ProvenDominates);
                CHECK(verdict.fired_by == DominanceCondition::Thm1);
            }
        }
        CHECK(found);
    }

    // n2 = 2: the decisive rule takes over, in both directions.
    const auto dec_pos =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.0, 0.5), ModelConfig{6, 2.0, 2.0});
    CHECK(dec_pos.fired_by == DominanceCondition::Cor2);
    CHECK(dec_pos.holds == DominanceHolds::ProvenDominates);
    const auto dec_neg =
        chi2pred::dominance_report(PriorSpec::hierarchical(1.0, -0.5), ModelConfig{6, 2.0, 2.0});
    CHECK(dec_neg.fired_by == DominanceCondition::Cor2);
    CHECK(dec_neg.holds == DominanceHolds::ProvenFailsNecessary);
    CHECK(dec_neg.margin == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("report edge cases") {
    // A mixing exponent covered by no condition.
    const auto odd =
        chi2pred::dominance_report(PriorSpec::hierarchical(2.7, 1.0), ModelConfig{6, 3.0, 3.0});
    CHECK(odd.holds == DominanceHolds::Inconclusive);
    CHECK(odd.fired_by == DominanceCondition::None);
    CHECK_FALSE(odd.note.empty());

    CHECK_THROWS_AS(chi2pred::dominance_report(PriorSpec::reference(), ModelConfig{6, 3.0, 3.0}),
                    std::invalid_argument);

    CHECK(chi2pred::dominance_holds_name(DominanceHolds::ProvenDominates) == "ProvenDominates");
    CHECK(chi2pred::dominance_holds_name(DominanceHolds::ProvenFailsNecessary) ==
          "ProvenFailsNecessary");
    CHECK(chi2pred::dominance_holds_name(DominanceHolds::Inconclusive) == "Inconclusive");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Thm1) == "Thm1");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Cor1i) == "Cor1i");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Cor1ii) == "Cor1ii");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Cor2) == "Cor2");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Thm3) == "Thm3");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::Thm4) == "Thm4");
    CHECK(chi2pred::dominance_condition_name(DominanceCondition::None) == "None");
}

TEST_CASE("margins vary continuously in the shrinkage exponent") {
    const ModelConfig config{10, 4.0, 5.0};
    for (double a : {-0.5, 0.0, 1.0, 3.0, 4.5}) {
        const double m0 = chi2pred::thm1_condition(config, a).margin;
        const double m1 = chi2pred::thm1_condition(config, a + 1e-4).margin;
        CAPTURE(a);
        CHECK(std::abs(m1 - m0) <= 0.01);
    }
}
