#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chi2pred/dominance.hpp"
#include "chi2pred/model.hpp"
#include "chi2pred/predictive.hpp"
#include "chi2pred/quadrature.hpp"

namespace chi2pred {

/// Result of a Monte Carlo risk estimation.  Fully determined by the inputs
/// and (seed, reps); worker count never changes the bits.
struct RiskEstimate {
    double mean = 0.0;      ///< average Kullback-Leibler loss, in nats
    double std_error = 0.0; ///< sample std dev / sqrt(reps); NaN when reps == 1
    std::int64_t reps = 0;
    std::uint64_t seed = 0;
};

/// Closed-form constant risk of the reference-prior predictive density
/// (independent of theta and of p).
double ref_risk_constant(const ModelConfig& config);

/// Monte Carlo estimate of the Kullback-Leibler risk of the given prior's
/// predictive density at noncentrality theta (eta fixed to 1; the risk depends
/// on (mu, eta) only through theta).  Replication i uses the RNG substream
/// derived from (seed, i), so results are identical for any worker count.
/// threads == 0 picks the hardware concurrency.  Failed replications are
/// counted and reported via a runtime error, never silently dropped.
RiskEstimate mc_risk(const PriorSpec& prior, const ModelConfig& config, double theta,
                     std::int64_t reps, std::uint64_t seed, const QuadSettings& settings = {},
                     int threads = 0);

/// One term of the series behind riskdiff_n2eq2: the exact per-mixture-index
/// risk-difference contribution D1(z) + D2(z).  Requires n2 == 2, a < p/2.
double riskdiff_n2eq2_term(const ModelConfig& config, double a, int z,
                           const QuadSettings& settings = {});

/// Exact (semi-analytic) risk difference hierarchical-minus-reference for
/// b = n1/2 when n2 = 2, as a Poisson mixture over riskdiff_n2eq2_term.
double riskdiff_n2eq2(const ModelConfig& config, double a, double theta,
                      const QuadSettings& settings = {});

/// Semi-analytic risk difference hierarchical-minus-reference for b = 1,
/// computed as a Poisson mixture of log-incomplete-beta moment integrals.
double riskdiff_b1(const ModelConfig& config, double a, double theta,
                   const QuadSettings& settings = {});

/// Grid definition for a risk experiment: the cross product
/// configs x priors x theta_grid, all cells sharing (reps, seed) so that
/// priors are compared on common random numbers.
struct ExperimentConfig {
    std::vector<ModelConfig> configs;
    std::vector<PriorSpec> priors;
    std::vector<double> theta_grid;
    std::int64_t reps = 20000;
    std::uint64_t seed = 1729;
    QuadSettings quad{};
    int threads = 0;
    void validate() const;
};

/// One result cell.  config_index / prior_index refer to the lists in the
/// ExperimentConfig that produced the row.  Reference priors yield a single
/// baseline row (their risk does not depend on theta), reported at theta = 0.
struct ExperimentRow {
    std::size_t config_index = 0;
    std::size_t prior_index = 0;
    double theta = 0.0;
    RiskEstimate estimate{};
    double ref_risk = 0.0;
    bool has_verdict = false;
    DominanceVerdict verdict{};
    std::string error; ///< empty on success; failures never abort the run
};

/// Runs every cell of the experiment in a deterministic order: for each
/// config, for each prior (reference priors once, hierarchical priors over the
/// whole theta grid).  Per-cell failures are recorded in the row's error field
/// and the run continues.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& exp);

} // namespace chi2pred
