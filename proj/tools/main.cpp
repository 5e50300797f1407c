// hetseg command-line front end.
//
// Exit status: 0 success / no rejection, 1 rejection (or change points found),
// 2 usage or configuration error, 3 data error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hetseg/dgp.hpp"
#include "hetseg/error.hpp"
#include "hetseg/io.hpp"
#include "hetseg/limit.hpp"
#include "hetseg/segmentation.hpp"

namespace {

using namespace hetseg;

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Options {
    std::string input;
    std::string response = "y";
    std::vector<std::string> covariates;
    bool no_intercept = false;
    std::string method = "V_HET";
    double kappa = 0.5;
    double alpha = 0.05;
    std::string kernel = "bartlett";
    std::string bandwidth = "auto";
    std::string cv;
    std::size_t kl_grid = kDefaultKlGrid;
    std::size_t kl_truncation = kDefaultKlTruncation;
    std::size_t reps = 0;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string emit_cusum;
    // segment
    std::optional<std::size_t> min_segment;
    std::optional<std::size_t> max_depth;
    bool bonferroni = false;
    // simulate
    std::string design = "hetero-covariate-error";
    std::string errors = "normal";
    std::size_t n = 250;
    std::vector<double> deltas{0.0};
    double break_fraction = 0.5;
    double ratio = 1.0;
    std::string emit_data;
    // critical-values / limit-sim
    std::size_t d = 2;
    std::string kind = "ou";
    double x = 3.0;
    double horizon = 0.0;
    int r = 1;
    double dt = kDefaultOuStep;
    bool grid_only = false;
    double c1 = 0.0;
    double c2 = 0.0;
};

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("HETSEG_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') throw Error(ErrorKind::InvalidConfig, std::string("HETSEG_SEED is not an integer: ") + env);
        return v;
    }
    return 0;
}

template <typename E>
E lookup(const std::map<std::string, E>& table, const std::string& key, const char* what) {
    const auto it = table.find(key);
    if (it == table.end()) throw Error(ErrorKind::InvalidConfig, std::string("unknown ") + what + " '" + key + "'");
    return it->second;
}

TestConfig test_config(const Options& o) {
    TestConfig cfg;
    cfg.statistic = lookup<StatisticKind>(
        {{"V_HET", StatisticKind::V_HET}, {"Q_HET", StatisticKind::Q_HET}, {"V_HO", StatisticKind::V_HO}, {"Q_HO", StatisticKind::Q_HO}},
        o.method, "method");
    cfg.kappa = o.kappa;
    cfg.alpha = o.alpha;
    cfg.kernel.kind = lookup<KernelKind>({{"bartlett", KernelKind::Bartlett}, {"parzen", KernelKind::Parzen}}, o.kernel, "kernel");
    if (o.bandwidth != "auto") {
        try {
            std::size_t used = 0;
            cfg.kernel.bandwidth = std::stod(o.bandwidth, &used);
            if (used != o.bandwidth.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidConfig, "bandwidth must be a number or 'auto'");
        }
    }
    if (o.cv.empty()) {
        cfg.cv_source = o.kappa == 0.5 ? CvSource::Vostrikova : CvSource::KLSimulated;
    } else {
        cfg.cv_source = lookup<CvSource>(
            {{"vostrikova", CvSource::Vostrikova}, {"darling-erdos", CvSource::DarlingErdos}, {"kl", CvSource::KLSimulated}},
            o.cv, "critical-value source");
    }
    cfg.kl.grid = o.kl_grid;
    cfg.kl.truncation = o.kl_truncation;
    if (o.reps > 0) cfg.kl.reps = o.reps;
    cfg.kl.seed = resolve_seed(o);
    cfg.validate();
    return cfg;
}

Dataset load(const Options& o) {
    io::CsvSelection sel;
    sel.response = o.response;
    sel.covariates = o.covariates;
    sel.intercept = !o.no_intercept;
    return io::read_csv(std::filesystem::path(o.input), sel);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    out << text << '\n';
}

int cmd_test(const Options& o) {
    const TestConfig cfg = test_config(o);
    const Dataset data = load(o);
    const TestDetail detail = run_test_detailed(data, cfg);
    emit(io::report_json(detail.report), o.output);
    if (!o.emit_cusum.empty()) io::emit_cusum_table(detail.path, detail.profile, std::filesystem::path(o.emit_cusum));
    return detail.report.reject ? kExitReject : 0;
}

int cmd_segment(const Options& o) {
    SegmentationConfig cfg;
    cfg.test = test_config(o);
    cfg.min_segment = o.min_segment;
    cfg.max_depth = o.max_depth;
    cfg.bonferroni = o.bonferroni;
    const Dataset data = load(o);
    const SegmentationResult result = binary_segment(data, cfg);
    emit(io::report_json(result), o.output);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    return result.change_points.empty() ? 0 : kExitReject;
}

dgp::DgpConfig design_config(const Options& o, double delta, std::uint64_t seed) {
    const auto design = lookup<dgp::Design>({{"hetero-covariate-error", dgp::Design::HeteroCovariateAndError},
                                             {"homoscedastic", dgp::Design::Homoscedastic},
                                             {"hetero-error", dgp::Design::HeteroError},
                                             {"hetero-covariate", dgp::Design::HeteroCovariate},
                                             {"ratio", dgp::Design::RatioScaledError}},
                                            o.design, "design");
    const auto family = lookup<dgp::ErrorFamily>({{"normal", dgp::ErrorFamily::Normal},
                                                  {"ar", dgp::ErrorFamily::AR},
                                                  {"garch", dgp::ErrorFamily::GARCH},
                                                  {"smooth", dgp::ErrorFamily::Smooth}},
                                                 o.errors, "error family");
    return dgp::simulation_design(design, family, o.n, delta, o.break_fraction, seed, o.ratio);
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    std::ostringstream out;
    out << 'y';
    const Eigen::Index first = data.has_intercept() ? 1 : 0;
    for (Eigen::Index j = first; j < data.x().cols(); ++j) out << ",x" << (j - first + 1);
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < data.x().rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", data.y()(i));
        out << buf;
        for (Eigen::Index j = first; j < data.x().cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.x()(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    file << out.str();
}

int cmd_simulate(const Options& o) {
    const std::uint64_t seed = resolve_seed(o);
    if (!o.emit_data.empty()) {
        write_dataset_csv(dgp::generate(design_config(o, o.deltas.front(), seed)), o.emit_data);
        return 0;
    }
    const TestConfig cfg = test_config(o);
    const std::size_t reps = o.reps > 0 ? o.reps : 1000;
    std::ostringstream out;
    out << "delta,rate,se,reps,failures\n";
    for (double delta : o.deltas) {
        const auto s = dgp::rejection_rate(design_config(o, delta, 0), cfg, reps, seed);
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%zu,%zu", delta, s.rate, s.standard_error, s.reps, s.failures);
        out << buf << '\n';
    }
    std::string text = out.str();
    text.pop_back();
    emit(text, o.output);
    return 0;
}

int cmd_critical_values(const Options& o) {
    nlohmann::json doc{{"n", o.n}, {"d", o.d}, {"alpha", o.alpha}};
    for (auto m : {CriticalMethod::VostrikovaV, CriticalMethod::VostrikovaQ, CriticalMethod::DarlingErdosV,
                   CriticalMethod::DarlingErdosQ}) {
        doc[std::string(to_string(m))] = io::round12(critical_value(o.alpha, o.n, o.d, m));
    }
    emit(doc.dump(2), o.output);
    return 0;
}

int cmd_limit_sim(const Options& o) {
    const std::uint64_t seed = resolve_seed(o);
    const std::size_t reps = o.reps > 0 ? o.reps : 10000;
    nlohmann::json doc{{"kind", o.kind}, {"reps", reps}, {"seed", seed}};
    if (o.kind == "ou") {
        const double horizon = o.horizon > 0.0 ? o.horizon : 2.0 * std::log(static_cast<double>(o.n));
        const auto est = simulate_ou_sup_tail(o.x, horizon, o.r, reps, seed, o.dt,
                                              o.grid_only ? OuSampling::Grid : OuSampling::BridgeCorrected);
        doc.update({{"x", o.x}, {"horizon", io::round12(horizon)}, {"r", o.r}, {"dt", o.dt},
                    {"probability", io::round12(est.probability)}, {"standard_error", io::round12(est.standard_error)}});
        if (o.x > std::sqrt(static_cast<double>(o.r)))
            doc["vostrikova"] = io::round12(vostrikova_tail(o.x, horizon, o.r));
    } else if (o.kind == "bridge") {
        const double c1 = o.c1 > 0.0 ? o.c1 : 1.0 / static_cast<double>(o.n);
        const double c2 = o.c2 > 0.0 ? o.c2 : 1.0 / static_cast<double>(o.n);
        const auto sample = simulate_trimmed_bridge_sup(o.n, o.d, c1, c2, reps, seed);
        doc.update({{"n", o.n}, {"d", o.d}, {"c1", c1}, {"c2", c2}, {"alpha", o.alpha},
                    {"quantile", io::round12(empirical_quantile(sample, 1.0 - o.alpha))}});
    } else if (o.kind == "kl-bridge") {
        const KLBasis basis = kl_decompose(brownian_bridge_kernel(o.d), midpoint_grid(o.kl_grid),
                                           std::min(o.kl_truncation, o.kl_grid * o.d));
        const Norm norm = o.method.front() == 'Q' ? Norm::Max : Norm::Euclidean;
        const double q = simulate_weighted_limit_quantile(basis, WeightSpec{o.kappa}, norm, o.alpha, reps, seed);
        doc.update({{"d", o.d}, {"kappa", o.kappa}, {"alpha", o.alpha}, {"grid", o.kl_grid},
                    {"truncation", basis.truncation()}, {"quantile", io::round12(q)}});
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown limit-sim kind '" + o.kind + "'");
    }
    emit(doc.dump(2), o.output);
    return 0;
}

void add_test_flags(CLI::App* app, Options& o) {
    app->add_option("--method", o.method, "V_HET, Q_HET, V_HO or Q_HO")->capture_default_str();
    app->add_option("--kappa", o.kappa, "weight exponent in [0, 1/2]")->capture_default_str();
    app->add_option("--alpha", o.alpha, "significance level in (0, 1/2]")->capture_default_str();
    app->add_option("--kernel", o.kernel, "bartlett or parzen")->capture_default_str();
    app->add_option("--bandwidth", o.bandwidth, "number or 'auto' (Andrews AR(1) plug-in)")->capture_default_str();
    app->add_option("--cv", o.cv, "vostrikova, darling-erdos or kl (default: vostrikova for kappa = 1/2, kl otherwise)");
    app->add_option("--kl-grid", o.kl_grid, "grid size of the Karhunen-Loeve simulation")->capture_default_str();
    app->add_option("--kl-truncation", o.kl_truncation, "number of Karhunen-Loeve terms")->capture_default_str();
    app->add_option("--reps", o.reps, "Monte Carlo replications");
    app->add_option("--seed", o.seed, "master seed (overrides HETSEG_SEED)");
    app->add_option("-o,--output", o.output, "output file (default stdout)");
}

void add_input_flags(CLI::App* app, Options& o) {
    app->add_option("-i,--input", o.input, "CSV file with a header row")->required();
    app->add_option("--response", o.response, "response column")->capture_default_str();
    app->add_option("--covariates", o.covariates, "covariate columns (default: all others)")->delimiter(',');
    app->add_flag("--no-intercept", o.no_intercept, "do not prepend an intercept column");
}

bool is_data_error(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::DomainError:
            return false;
        default:
            return true;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Change-point tests for linear regressions with heteroscedastic errors and covariates"};
    app.require_subcommand(1);
    Options o;

    auto* test = app.add_subcommand("test", "run one change-point test on a CSV file");
    add_input_flags(test, o);
    add_test_flags(test, o);
    test->add_option("--emit-cusum", o.emit_cusum, "write the CUSUM table (CSV) to this file");

    auto* segment = app.add_subcommand("segment", "binary segmentation of a CSV file");
    add_input_flags(segment, o);
    add_test_flags(segment, o);
    segment->add_option("--min-segment", o.min_segment, "shortest admissible segment (default max(20, 5 d))");
    segment->add_option("--max-depth", o.max_depth, "maximum recursion depth (default floor(log2(N / min_segment)))");
    segment->add_flag("--bonferroni", o.bonferroni, "use alpha / 2^depth at depth j");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rates on a simulation design");
    add_test_flags(simulate, o);
    simulate->add_option("--design", o.design,
                         "hetero-covariate-error, homoscedastic, hetero-error, hetero-covariate or ratio")
        ->capture_default_str();
    simulate->add_option("--errors", o.errors, "normal, ar, garch or smooth")->capture_default_str();
    simulate->add_option("-n,--n", o.n, "sample size")->capture_default_str();
    simulate->add_option("--delta", o.deltas, "change sizes (comma separated)")->delimiter(',');
    simulate->add_option("--break", o.break_fraction, "break fraction theta, k* = floor(theta N)")->capture_default_str();
    simulate->add_option("--ratio", o.ratio, "variance multiplier r for the ratio design")->capture_default_str();
    simulate->add_option("--emit-data", o.emit_data, "write one generated dataset (first delta) as CSV and exit");

    auto* crit = app.add_subcommand("critical-values", "closed-form critical values");
    crit->add_option("-n,--n", o.n, "sample size")->capture_default_str();
    crit->add_option("-d,--d", o.d, "dimension")->capture_default_str();
    crit->add_option("--alpha", o.alpha, "significance level")->capture_default_str();
    crit->add_option("-o,--output", o.output, "output file (default stdout)");

    auto* lim = app.add_subcommand("limit-sim", "simulate limit laws");
    lim->add_option("--kind", o.kind, "ou, bridge or kl-bridge")->capture_default_str();
    lim->add_option("-x,--x", o.x, "level for the OU tail")->capture_default_str();
    lim->add_option("--horizon", o.horizon, "OU horizon T (default 2 log n)");
    lim->add_option("-r,--r", o.r, "OU dimension")->capture_default_str();
    lim->add_option("--dt", o.dt, "OU step")->capture_default_str();
    lim->add_flag("--grid-only", o.grid_only, "OU maximum over grid points only");
    lim->add_option("-n,--n", o.n, "sample size / bridge grid")->capture_default_str();
    lim->add_option("-d,--d", o.d, "dimension")->capture_default_str();
    lim->add_option("--c1", o.c1, "left trimming (default 1/n)");
    lim->add_option("--c2", o.c2, "right trimming (default 1/n)");
    lim->add_option("--alpha", o.alpha, "level of the reported quantile")->capture_default_str();
    lim->add_option("--kappa", o.kappa, "weight exponent for kl-bridge")->capture_default_str();
    lim->add_option("--method", o.method, "V_* (Euclidean) or Q_* (max norm) for kl-bridge")->capture_default_str();
    lim->add_option("--kl-grid", o.kl_grid, "grid size")->capture_default_str();
    lim->add_option("--kl-truncation", o.kl_truncation, "number of terms")->capture_default_str();
    lim->add_option("--reps", o.reps, "replications (default 10000)");
    lim->add_option("--seed", o.seed, "master seed (overrides HETSEG_SEED)");
    lim->add_option("-o,--output", o.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*test) return cmd_test(o);
        if (*segment) return cmd_segment(o);
        if (*simulate) return cmd_simulate(o);
        if (*crit) return cmd_critical_values(o);
        if (*lim) return cmd_limit_sim(o);
    } catch (const Error& e) {
        std::cerr << "hetseg: " << e.what() << '\n';
        return is_data_error(e.kind()) ? kExitData : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "hetseg: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
