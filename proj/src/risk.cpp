#include "chi2pred/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "chi2pred/rng.hpp"
#include "chi2pred/specfun.hpp"

namespace chi2pred {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fixed-shape pairwise reduction: the summation tree depends only on n, so the
// result is bit-identical no matter how the values were produced.
double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

struct PoissonWeight {
    int z;
    double weight;
};

// Poisson(mean) pmf values covering all but 1e-12 of the mass, in increasing z
// order, with a hard cap on the largest index.
std::vector<PoissonWeight> poisson_weights(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::domain_error("poisson_weights: mean must be nonnegative (got " +
                                std::to_string(mean) + ")");
    if (mean == 0.0)
        return {{0, 1.0}};
    const int cap = static_cast<int>(std::ceil(mean + 40.0 * std::sqrt(mean) + 100.0));
    std::vector<PoissonWeight> out;
    double cumulative = 0.0;
    for (int z = 0; z <= cap; ++z) {
        const double log_pmf =
            -mean + z * std::log(mean) - specfun::log_gamma(static_cast<double>(z) + 1.0);
        const double w = std::exp(log_pmf);
        out.push_back({z, w});
        cumulative += w;
        if (cumulative >= 1.0 - 1e-12)
            break;
    }
    return out;
}

void check_reps(std::int64_t reps, const char* fn) {
    if (reps < 1)
        throw std::domain_error(std::string(fn) + ": reps must be >= 1 (got " +
                                std::to_string(reps) + ")");
}

void check_theta(double theta, const char* fn) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::domain_error(std::string(fn) + ": theta must be nonnegative (got " +
                                std::to_string(theta) + ")");
}

// Integrand of the criterion integral with the 1/rho singularity removed
// (same form as in the dominance checks).
double criterion_integrand(double rho, double c1, double kl) {
    if (rho < 1e-300)
        return kl * c1;
    return -std::expm1(-kl * std::log1p(c1 * rho)) / rho;
}

// Log of the regularized incomplete beta with a small-q asymptotic so that
// quadrature nodes exponentially close to 0 stay finite and accurate.
double log_inc_beta_with_asymptote(double q, double log_q, double alpha, double beta,
                                   double log_beta_ab) {
    if (q < 1e-8)
        return alpha * log_q - std::log(alpha) - log_beta_ab;
    return specfun::log_reg_inc_beta(q, alpha, beta);
}

// -E[ln I_Q(m', n/2)] for Q ~ Beta(m + z, n/2): one Poisson-mixture term of
// the b = 1 risk difference.
double b1_term(double n, int z, double m, double m_prime, const QuadSettings& settings) {
    const double nh = 0.5 * n;
    const double lb = specfun::log_beta(m_prime, nh);
    const double integral = integrate_01_weighted(
        [m_prime, nh, lb](double q, double log_q, double /*log_1mq*/) {
            return log_inc_beta_with_asymptote(q, log_q, m_prime, nh, lb);
        },
        m + z, nh, settings);
    return -std::exp(-specfun::log_beta(m + z, nh)) * integral;
}

} // namespace

double ref_risk_constant(const ModelConfig& config) {
    config.validate();
    const double k = 0.5 * config.n1;
    const double l = 0.5 * config.n2;
    return -specfun::log_gamma(l) - l + specfun::log_beta(k, l) - k * specfun::digamma(k) +
           (k + l) * specfun::digamma(k + l);
}

RiskEstimate mc_risk(const PriorSpec& prior, const ModelConfig& config, double theta,
                     std::int64_t reps, std::uint64_t seed, const QuadSettings& settings,
                     int threads) {
    config.validate();
    if (prior.kind == PriorSpec::Kind::Hierarchical)
        prior.hp.validate(config);
    check_theta(theta, "mc_risk");
    check_reps(reps, "mc_risk");
    settings.validate();

    const std::size_t n = static_cast<std::size_t>(reps);
    std::vector<double> losses(n, kNaN);
    const SimulationPoint point{theta, 1.0};

    unsigned worker_count = threads > 0 ? static_cast<unsigned>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    worker_count = static_cast<unsigned>(
        std::min<std::size_t>(worker_count, n));

    struct WorkerReport {
        std::size_t failures = 0;
        std::string first_error;
    };
    std::vector<WorkerReport> reports(worker_count);

    auto run_block = [&](std::size_t begin, std::size_t end, WorkerReport& report) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                RandomStream stream = RandomStream::substream(seed, i);
                const DrawResult draw = sample_observation(point, config, stream);
                losses[i] = log_p2(draw.w, 1.0, config) -
                            log_predictive(draw.w, draw.obs, prior, config, settings);
            } catch (const std::exception& e) {
                ++report.failures;
                if (report.first_error.empty())
                    report.first_error = e.what();
            }
        }
    };

    if (worker_count <= 1) {
        run_block(0, n, reports[0]);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        const std::size_t chunk = (n + worker_count - 1) / worker_count;
        for (unsigned t = 0; t < worker_count; ++t) {
            const std::size_t begin = static_cast<std::size_t>(t) * chunk;
            const std::size_t end = std::min(begin + chunk, n);
            workers.emplace_back(run_block, begin, end, std::ref(reports[t]));
        }
        for (auto& w : workers)
            w.join();
    }

    std::size_t failures = 0;
    std::string first_error;
    for (const auto& r : reports) {
        failures += r.failures;
        if (first_error.empty())
            first_error = r.first_error;
    }
    if (failures > 0)
        throw std::runtime_error("mc_risk: " + std::to_string(failures) + " of " +
                                 std::to_string(n) + " replications failed; first error: " +
                                 first_error);

    RiskEstimate est;
    est.reps = reps;
    est.seed = seed;
    est.mean = pairwise_sum(losses.data(), n) / static_cast<double>(n);
    if (n == 1) {
        est.std_error = kNaN;
        return est;
    }
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = losses[i] - est.mean;
        sq[i] = d * d;
    }
    const double variance = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    est.std_error = std::sqrt(variance / static_cast<double>(n));
    return est;
}

double riskdiff_n2eq2_term(const ModelConfig& config, double a, int z,
                           const QuadSettings& settings) {
    config.validate();
    if (config.n2 != 2.0)
        throw std::domain_error("riskdiff_n2eq2_term: requires n2 == 2 (got " +
                                std::to_string(config.n2) + ")");
    if (z < 0)
        throw std::domain_error("riskdiff_n2eq2_term: z must be nonnegative");
    const auto dc = constants(config, a);
    const auto sp = ShapeParams::from(config, a);
    const double kl = sp.k + sp.l;
    const double d1 = sp.m_prime * specfun::digamma_diff(kl + sp.m + z, sp.k + sp.m + z);
    const double d2 = -dc.c2 * integrate_beta_weighted(
                                   [&dc, kl](double rho) {
                                       return criterion_integrand(rho, dc.c1, kl);
                                   },
                                   1.0, kl + sp.m + z, settings);
    return d1 + d2;
}

double riskdiff_n2eq2(const ModelConfig& config, double a, double theta,
                      const QuadSettings& settings) {
    check_theta(theta, "riskdiff_n2eq2");
    const auto weights = poisson_weights(0.5 * theta);
    double total = 0.0;
    for (const auto& pw : weights)
        total += pw.weight * riskdiff_n2eq2_term(config, a, pw.z, settings);
    return total;
}

double riskdiff_b1(const ModelConfig& config, double a, double theta,
                   const QuadSettings& settings) {
    config.validate();
    check_theta(theta, "riskdiff_b1");
    if (!std::isfinite(a) || !(a < 0.5 * config.p))
        throw std::domain_error("riskdiff_b1: requires a < p/2 (a=" + std::to_string(a) +
                                ", p=" + std::to_string(config.p) + ")");
    const double m = 0.5 * config.p;
    const double m_prime = m - a;
    const auto weights = poisson_weights(0.5 * theta);
    double total = 0.0;
    for (const auto& pw : weights) {
        const double both = b1_term(config.n1 + config.n2, pw.z, m, m_prime, settings);
        const double first = b1_term(config.n1, pw.z, m, m_prime, settings);
        total += pw.weight * (both - first);
    }
    return total;
}

void ExperimentConfig::validate() const {
    if (configs.empty())
        throw std::domain_error("ExperimentConfig: configs must be non-empty");
    if (priors.empty())
        throw std::domain_error("ExperimentConfig: priors must be non-empty");
    if (theta_grid.empty())
        throw std::domain_error("ExperimentConfig: theta_grid must be non-empty");
    for (const auto& c : configs)
        c.validate();
    for (double theta : theta_grid)
        check_theta(theta, "ExperimentConfig");
    check_reps(reps, "ExperimentConfig");
    quad.validate();
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& exp) {
    exp.validate();
    std::vector<ExperimentRow> rows;
    for (std::size_t ci = 0; ci < exp.configs.size(); ++ci) {
        const ModelConfig& config = exp.configs[ci];
        const double baseline = ref_risk_constant(config);
        for (std::size_t pi = 0; pi < exp.priors.size(); ++pi) {
            const PriorSpec& prior = exp.priors[pi];
            const bool is_ref = prior.kind == PriorSpec::Kind::Reference;
            const std::vector<double> thetas =
                is_ref ? std::vector<double>{0.0} : exp.theta_grid;
            for (double theta : thetas) {
                ExperimentRow row;
                row.config_index = ci;
                row.prior_index = pi;
                row.theta = theta;
                row.ref_risk = baseline;
                row.estimate.mean = kNaN;
                row.estimate.std_error = kNaN;
                row.estimate.reps = exp.reps;
                row.estimate.seed = exp.seed;
                try {
                    row.estimate = mc_risk(prior, config, theta, exp.reps, exp.seed,
                                           exp.quad, exp.threads);
                    if (!is_ref) {
                        row.verdict = dominance_report(prior, config, exp.quad);
                        row.has_verdict = true;
                    }
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace chi2pred
