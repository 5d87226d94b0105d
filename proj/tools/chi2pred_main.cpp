// Command-line front end: predictive-density evaluation, dominance checks,
// and Monte Carlo Kullback-Leibler risk experiments with CSV/JSON output.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chi2pred/dominance.hpp"
#include "chi2pred/errors.hpp"
#include "chi2pred/model.hpp"
#include "chi2pred/predictive.hpp"
#include "chi2pred/quadrature.hpp"
#include "chi2pred/risk.hpp"
#include "chi2pred/version.hpp"

namespace {

using chi2pred::DominanceVerdict;
using chi2pred::ExperimentConfig;
using chi2pred::ExperimentRow;
using chi2pred::ModelConfig;
using chi2pred::Observation;
using chi2pred::PriorSpec;
using chi2pred::QuadSettings;
using chi2pred::RiskEstimate;

constexpr double kUnsetReal = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDefaultSeed = 1729;

const char* kCsvHeader =
    "n1,n2,p,b_mode,b,a,theta,reps,seed,risk_mean,risk_stderr,ref_risk,verdict,margin,error";

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string fmt_u64(std::uint64_t value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%" PRIu64, value);
    return buf;
}

// CSV cells must stay single-cell and single-line.
std::string sanitize_cell(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r')
            c = ';';
    return text;
}

std::string iso8601_utc_now() {
    const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
    return buf;
}

std::vector<double> parse_theta_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            throw std::domain_error("--theta: empty entry in list '" + csv + "'");
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::domain_error("--theta: cannot parse '" + item + "' as a number");
        }
        if (used != item.size())
            throw std::domain_error("--theta: cannot parse '" + item + "' as a number");
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::domain_error("--theta: values must be nonnegative (got " + item + ")");
        out.push_back(value);
    }
    if (out.empty())
        throw std::domain_error("--theta: list is empty");
    return out;
}

// Overlays values from a flat JSON config file onto options the user did not
// pass explicitly (flag > config > default), and rejects unknown keys.
class ConfigOverlay {
  public:
    ConfigOverlay(CLI::App* sub, const std::string& path) : sub_(sub) {
        if (path.empty())
            return;
        std::ifstream in(path);
        if (!in)
            throw std::domain_error("--config: cannot open '" + path + "'");
        try {
            in >> json_;
        } catch (const std::exception& e) {
            throw std::domain_error("--config: invalid JSON in '" + path + "': " + e.what());
        }
        if (!json_.is_object())
            throw std::domain_error("--config: top-level JSON value must be an object");
    }

    template <typename T> bool apply(const char* name, T& target) {
        known_.push_back(name);
        if (!json_.contains(name))
            return false;
        if (sub_->count(std::string("--") + name) > 0)
            return false; // explicit flag wins
        try {
            target = json_.at(name).get<T>();
        } catch (const std::exception&) {
            throw std::domain_error(std::string("--config: key '") + name +
                                    "' has the wrong type");
        }
        return true;
    }

    void finish() const {
        for (const auto& [key, value] : json_.items()) {
            (void)value;
            bool ok = false;
            for (const auto& k : known_)
                if (key == k)
                    ok = true;
            if (!ok)
                throw std::domain_error("--config: unknown key '" + key + "'");
        }
    }

  private:
    CLI::App* sub_;
    nlohmann::json json_ = nlohmann::json::object();
    std::vector<std::string> known_;
};

struct ModelFlags {
    double n1 = kUnsetReal;
    double n2 = kUnsetReal;
    int p = -1;

    void add_to(CLI::App* sub) {
        sub->add_option("--n1", n1, "Degrees of freedom of the observed chi-squared v");
        sub->add_option("--n2", n2, "Degrees of freedom of the future chi-squared w");
        sub->add_option("--p", p, "Dimension of the normal observation x");
    }

    void overlay(ConfigOverlay& cfg) {
        cfg.apply("n1", n1);
        cfg.apply("n2", n2);
        cfg.apply("p", p);
    }

    ModelConfig resolve(const char* cmd) const {
        if (!std::isfinite(n1))
            throw std::domain_error(std::string(cmd) + ": --n1 is required");
        if (!std::isfinite(n2))
            throw std::domain_error(std::string(cmd) + ": --n2 is required");
        if (p < 0)
            throw std::domain_error(std::string(cmd) + ": --p is required");
        ModelConfig config{p, n1, n2};
        config.validate();
        return config;
    }
};

struct PriorFlags {
    std::string b_mode; // "half" | "one" | "general" | "" (use --b directly)
    double b = kUnsetReal;
    double a = 0.0;

    void add_to(CLI::App* sub) {
        sub->add_option("--b-mode", b_mode,
                        "Mixing-exponent family: 'half' (b = n1/2), 'one' (b = 1), or "
                        "'general' (takes b from --b)")
            ->check(CLI::IsMember({"half", "one", "general"}));
        sub->add_option("--b", b, "Mixing exponent b > 0 (used directly, or required by "
                                  "--b-mode general)");
        sub->add_option("--a", a, "Shrinkage exponent a < p/2 (default 0)");
    }

    void overlay(ConfigOverlay& cfg) {
        cfg.apply("b-mode", b_mode);
        cfg.apply("b", b);
        cfg.apply("a", a);
    }

    double resolve_b(const ModelConfig& config, const char* cmd) const {
        if (b_mode == "half")
            return 0.5 * config.n1;
        if (b_mode == "one")
            return 1.0;
        if (b_mode == "general" || b_mode.empty()) {
            if (!std::isfinite(b))
                throw std::domain_error(std::string(cmd) +
                                        ": --b is required (or pass --b-mode half|one)");
            return b;
        }
        throw std::domain_error(std::string(cmd) + ": unknown --b-mode '" + b_mode + "'");
    }

    // Family label for the CSV b_mode column.
    std::string mode_label(const ModelConfig& config, double resolved_b) const {
        if (!b_mode.empty())
            return b_mode;
        if (std::abs(resolved_b - 1.0) <= 1e-12)
            return "one";
        if (std::abs(resolved_b - 0.5 * config.n1) <= 1e-12)
            return "half";
        return "general";
    }
};

struct CsvRow {
    std::string n1, n2, p, b_mode, b, a, theta, reps, seed;
    std::string risk_mean, risk_stderr, ref_risk, verdict, margin, error;

    std::string line() const {
        std::string out;
        const std::string* cells[] = {&n1, &n2, &p, &b_mode, &b, &a, &theta, &reps, &seed,
                                      &risk_mean, &risk_stderr, &ref_risk, &verdict, &margin,
                                      &error};
        for (std::size_t i = 0; i < std::size(cells); ++i) {
            if (i > 0)
                out += ',';
            out += *cells[i];
        }
        return out;
    }
};

void write_csv(const std::string& out_path, const std::vector<CsvRow>& rows) {
    std::ostringstream body;
    body << kCsvHeader << '\n';
    for (const auto& row : rows)
        body << row.line() << '\n';
    if (out_path.empty() || out_path == "-") {
        std::cout << body.str();
        return;
    }
    std::ofstream out(out_path, std::ios::binary); // binary keeps LF endings
    if (!out)
        throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << body.str();
    if (!out)
        throw std::runtime_error("failed writing output file '" + out_path + "'");
}

CsvRow make_row(const ModelConfig& config, const std::string& mode_label, double b, double a,
                bool is_ref, double theta, std::int64_t reps, std::uint64_t seed) {
    CsvRow row;
    row.n1 = fmt(config.n1);
    row.n2 = fmt(config.n2);
    row.p = std::to_string(config.p);
    row.b_mode = mode_label;
    row.b = is_ref ? "" : fmt(b);
    row.a = is_ref ? "" : fmt(a);
    row.theta = fmt(theta);
    row.reps = std::to_string(reps);
    row.seed = fmt_u64(seed);
    return row;
}

void fill_estimate(CsvRow& row, const RiskEstimate& est, double ref_risk) {
    row.risk_mean = fmt(est.mean);
    row.risk_stderr = fmt(est.std_error);
    row.ref_risk = fmt(ref_risk);
}

void fill_verdict(CsvRow& row, const DominanceVerdict& verdict) {
    row.verdict = chi2pred::dominance_holds_name(verdict.holds);
    row.margin = fmt(verdict.margin);
}

struct DensityCmd {
    ModelFlags model;
    PriorFlags prior;
    std::string prior_kind;
    double v = kUnsetReal;
    double w = kUnsetReal;
    double xnormsq = 0.0;
    double tol = kUnsetReal;
    std::string config_path;

    void run(CLI::App* sub) {
        ConfigOverlay cfg(sub, config_path);
        model.overlay(cfg);
        prior.overlay(cfg);
        cfg.apply("prior", prior_kind);
        cfg.apply("v", v);
        cfg.apply("w", w);
        cfg.apply("xnormsq", xnormsq);
        cfg.apply("tol", tol);
        cfg.finish();

        const ModelConfig config = model.resolve("density");
        if (prior_kind != "ref" && prior_kind != "hier")
            throw std::domain_error("density: --prior must be 'ref' or 'hier'");
        if (!std::isfinite(v))
            throw std::domain_error("density: --v is required");
        if (!std::isfinite(w))
            throw std::domain_error("density: --w is required");
        PriorSpec spec = PriorSpec::reference();
        if (prior_kind == "hier")
            spec = PriorSpec::hierarchical(prior.resolve_b(config, "density"), prior.a);

        QuadSettings settings;
        if (std::isfinite(tol))
            settings.rel_tol = tol;
        const Observation obs{xnormsq, v};
        chi2pred::EvalPath path{};
        const double log_density = chi2pred::log_predictive(w, obs, spec, config, settings, &path);
        std::cout << "log_density = " << fmt(log_density) << '\n'
                  << "density = " << fmt(std::exp(log_density)) << '\n'
                  << "evaluator = " << chi2pred::eval_path_name(path) << '\n';
    }
};

struct CheckCmd {
    ModelFlags model;
    PriorFlags prior;
    double tol = kUnsetReal;
    std::string config_path;

    void run(CLI::App* sub) {
        ConfigOverlay cfg(sub, config_path);
        model.overlay(cfg);
        prior.overlay(cfg);
        cfg.apply("tol", tol);
        cfg.finish();

        const ModelConfig config = model.resolve("check");
        const double b = prior.resolve_b(config, "check");
        const PriorSpec spec = PriorSpec::hierarchical(b, prior.a);
        QuadSettings settings;
        if (std::isfinite(tol))
            settings.rel_tol = tol;
        const DominanceVerdict verdict = chi2pred::dominance_report(spec, config, settings);

        nlohmann::ordered_json out;
        out["n1"] = config.n1;
        out["n2"] = config.n2;
        out["p"] = config.p;
        out["b"] = b;
        out["a"] = prior.a;
        out["holds"] = chi2pred::dominance_holds_name(verdict.holds);
        out["fired_by"] = chi2pred::dominance_condition_name(verdict.fired_by);
        out["margin"] = verdict.margin;
        out["tolerance"] = chi2pred::kMarginTol;
        out["note"] = verdict.note;
        std::cout << out.dump(2) << '\n';
    }
};

struct RiskCmd {
    ModelFlags model;
    PriorFlags prior;
    std::string prior_kind;
    std::string theta_csv = "0";
    std::int64_t reps = 20000;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    double tol = kUnsetReal;
    std::string out_path;
    std::string config_path;

    void run(CLI::App* sub) {
        ConfigOverlay cfg(sub, config_path);
        model.overlay(cfg);
        prior.overlay(cfg);
        cfg.apply("prior", prior_kind);
        cfg.apply("theta", theta_csv);
        cfg.apply("reps", reps);
        cfg.apply("seed", seed);
        cfg.apply("threads", threads);
        cfg.apply("tol", tol);
        cfg.apply("out", out_path);
        cfg.finish();

        const ModelConfig config = model.resolve("risk");
        if (prior_kind != "ref" && prior_kind != "hier")
            throw std::domain_error("risk: --prior must be 'ref' or 'hier'");
        const std::vector<double> thetas = parse_theta_list(theta_csv);
        if (reps < 1)
            throw std::domain_error("risk: --reps must be >= 1");

        const bool is_ref = prior_kind == "ref";
        PriorSpec spec = PriorSpec::reference();
        double b = 0.0;
        std::string mode_label = "ref";
        if (!is_ref) {
            b = prior.resolve_b(config, "risk");
            spec = PriorSpec::hierarchical(b, prior.a);
            mode_label = prior.mode_label(config, b);
        }
        QuadSettings settings;
        if (std::isfinite(tol))
            settings.rel_tol = tol;
        const double baseline = chi2pred::ref_risk_constant(config);

        std::vector<CsvRow> rows;
        std::size_t failures = 0;
        for (double theta : thetas) {
            CsvRow row = make_row(config, mode_label, b, prior.a, is_ref, theta, reps, seed);
            try {
                const RiskEstimate est =
                    chi2pred::mc_risk(spec, config, theta, reps, seed, settings, threads);
                fill_estimate(row, est, baseline);
                if (is_ref)
                    row.verdict = "Baseline";
                else
                    fill_verdict(row, chi2pred::dominance_report(spec, config, settings));
            } catch (const std::exception& e) {
                row.error = sanitize_cell(e.what());
                ++failures;
            }
            rows.push_back(std::move(row));
        }
        write_csv(out_path, rows);
        if (failures == rows.size())
            throw std::runtime_error("risk: all " + std::to_string(failures) +
                                     " cells failed; see the error column");
    }
};

struct Figure1Cmd {
    std::int64_t reps = 20000;
    bool paper_scale = false;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    double tol = kUnsetReal;
    std::string out_path = "figure1.csv";
    std::string config_path;

    void run(CLI::App* sub) {
        ConfigOverlay cfg(sub, config_path);
        cfg.apply("reps", reps);
        cfg.apply("paper-scale", paper_scale);
        cfg.apply("seed", seed);
        cfg.apply("threads", threads);
        cfg.apply("tol", tol);
        cfg.apply("out", out_path);
        cfg.finish();

        std::int64_t effective_reps = reps;
        if (paper_scale && sub->count("--reps") == 0)
            effective_reps = 100000;
        if (effective_reps < 1)
            throw std::domain_error("figure1: --reps must be >= 1");

        QuadSettings settings;
        if (std::isfinite(tol))
            settings.rel_tol = tol;

        const int p = 14;
        const std::vector<std::pair<double, double>> cases = {
            {3.0, 3.0}, {3.0, 5.0}, {5.0, 3.0}, {5.0, 5.0}};
        const std::vector<double> thetas = {0.0, 20.0, 40.0, 60.0};
        // Per configuration: baseline plus the four hierarchical priors
        // (b, a) in {(n1/2, 0), (n1/2, 6), (1, 0), (1, 6)}.
        struct PriorPreset {
            const char* mode;
            double a;
        };
        const std::vector<PriorPreset> presets = {
            {"ref", 0.0}, {"half", 0.0}, {"half", 6.0}, {"one", 0.0}, {"one", 6.0}};

        std::vector<CsvRow> rows;
        for (const auto& [n1, n2] : cases) {
            const ModelConfig config{p, n1, n2};
            ExperimentConfig exp;
            exp.configs = {config};
            exp.theta_grid = thetas;
            exp.reps = effective_reps;
            exp.seed = seed;
            exp.quad = settings;
            exp.threads = threads;
            std::vector<double> bs;
            for (const auto& preset : presets) {
                if (std::string(preset.mode) == "ref") {
                    exp.priors.push_back(PriorSpec::reference());
                    bs.push_back(0.0);
                } else {
                    const double b = std::string(preset.mode) == "half" ? 0.5 * n1 : 1.0;
                    exp.priors.push_back(PriorSpec::hierarchical(b, preset.a));
                    bs.push_back(b);
                }
            }
            const std::vector<ExperimentRow> cells = chi2pred::run_experiment(exp);
            for (const auto& cell : cells) {
                const PriorPreset& preset = presets[cell.prior_index];
                const bool is_ref = std::string(preset.mode) == "ref";
                CsvRow row = make_row(config, preset.mode, bs[cell.prior_index], preset.a,
                                      is_ref, cell.theta, effective_reps, seed);
                if (cell.error.empty()) {
                    fill_estimate(row, cell.estimate, cell.ref_risk);
                    if (is_ref)
                        row.verdict = "Baseline";
                    else if (cell.has_verdict)
                        fill_verdict(row, cell.verdict);
                } else {
                    row.ref_risk = fmt(cell.ref_risk);
                    row.error = sanitize_cell(cell.error);
                }
                rows.push_back(std::move(row));
            }
        }
        write_csv(out_path, rows);

        std::ostringstream canonical;
        canonical << "figure1;p=" << p << ";cases=";
        for (const auto& [n1, n2] : cases)
            canonical << fmt(n1) << ',' << fmt(n2) << '|';
        canonical << ";priors=";
        for (const auto& preset : presets)
            canonical << preset.mode << ':' << fmt(preset.a) << '|';
        canonical << ";thetas=";
        for (double theta : thetas)
            canonical << fmt(theta) << '|';
        canonical << ";reps=" << effective_reps << ";seed=" << fmt_u64(seed)
                  << ";rel_tol=" << fmt(settings.rel_tol);

        nlohmann::ordered_json manifest;
        manifest["tool_version"] = chi2pred::kVersion;
        manifest["seed"] = seed;
        manifest["timestamp"] = iso8601_utc_now();
        manifest["config_digest"] = fnv1a_hex(canonical.str());
        const std::string manifest_path =
            (out_path.empty() || out_path == "-") ? "figure1.csv.manifest.json"
                                                  : out_path + ".manifest.json";
        std::ofstream mout(manifest_path, std::ios::binary);
        if (!mout)
            throw std::runtime_error("cannot open manifest file '" + manifest_path + "'");
        mout << manifest.dump(2) << '\n';
        if (!mout)
            throw std::runtime_error("failed writing manifest file '" + manifest_path + "'");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian predictive densities for a chi-squared observable with "
                 "normal side information: density evaluation, dominance checks, and "
                 "Monte Carlo Kullback-Leibler risk experiments"};
    app.set_version_flag("--version", chi2pred::kVersion);
    app.require_subcommand(1);

    DensityCmd density;
    CLI::App* density_sub =
        app.add_subcommand("density", "Evaluate a predictive density at one point");
    density.model.add_to(density_sub);
    density.prior.add_to(density_sub);
    density_sub->add_option("--prior", density.prior_kind, "Prior: 'ref' or 'hier'");
    density_sub->add_option("--v", density.v, "Observed chi-squared value v > 0");
    density_sub->add_option("--w", density.w, "Future observable value w > 0");
    density_sub->add_option("--xnormsq", density.xnormsq,
                            "Squared norm of the normal observation (default 0; ignored "
                            "by the reference prior)");
    density_sub->add_option("--tol", density.tol, "Relative quadrature tolerance override");
    density_sub->add_option("--config", density.config_path, "Flat JSON config file");
    density_sub->callback([&] { density.run(density_sub); });

    CheckCmd check;
    CLI::App* check_sub = app.add_subcommand(
        "check", "Run dominance conditions for a hierarchical prior (JSON verdict)");
    check.model.add_to(check_sub);
    check.prior.add_to(check_sub);
    check_sub->add_option("--tol", check.tol, "Relative quadrature tolerance override");
    check_sub->add_option("--config", check.config_path, "Flat JSON config file");
    check_sub->callback([&] { check.run(check_sub); });

    RiskCmd risk;
    CLI::App* risk_sub = app.add_subcommand(
        "risk", "Monte Carlo Kullback-Leibler risk over a theta grid (CSV)");
    risk.model.add_to(risk_sub);
    risk.prior.add_to(risk_sub);
    risk_sub->add_option("--prior", risk.prior_kind, "Prior: 'ref' or 'hier'");
    risk_sub->add_option("--theta", risk.theta_csv,
                         "Comma-separated noncentrality values (default '0')");
    risk_sub->add_option("--reps", risk.reps, "Monte Carlo replications (default 20000)");
    risk_sub->add_option("--seed", risk.seed,
                         "RNG seed (default 1729; never wall-clock, so runs reproduce)");
    risk_sub->add_option("--threads", risk.threads,
                         "Worker threads (0 = hardware concurrency; never changes results)");
    risk_sub->add_option("--tol", risk.tol, "Relative quadrature tolerance override");
    risk_sub->add_option("--out", risk.out_path, "Output CSV path (default stdout)");
    risk_sub->add_option("--config", risk.config_path, "Flat JSON config file");
    risk_sub->callback([&] { risk.run(risk_sub); });

    Figure1Cmd figure1;
    CLI::App* figure1_sub = app.add_subcommand(
        "figure1", "Full risk-comparison grid: four (n1,n2) cases, p=14, "
                   "theta in {0,20,40,60}, baseline plus four hierarchical priors");
    figure1_sub->add_option("--reps", figure1.reps,
                            "Monte Carlo replications (default 20000)");
    figure1_sub->add_flag("--paper-scale", figure1.paper_scale,
                          "Use 100000 replications (unless --reps is given explicitly)");
    figure1_sub->add_option("--seed", figure1.seed, "RNG seed (default 1729)");
    figure1_sub->add_option("--threads", figure1.threads,
                            "Worker threads (0 = hardware concurrency)");
    figure1_sub->add_option("--tol", figure1.tol, "Relative quadrature tolerance override");
    figure1_sub->add_option("--out", figure1.out_path,
                            "Output CSV path (default figure1.csv); the run manifest is "
                            "written next to it");
    figure1_sub->add_option("--config", figure1.config_path, "Flat JSON config file");
    figure1_sub->callback([&] { figure1.run(figure1_sub); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
