// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: hetseg_acceptance [criterion...]   (no arguments runs all nine)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetseg/dgp.hpp"
#include "hetseg/limit.hpp"
#include "hetseg/lrv.hpp"
#include "hetseg/procedure.hpp"
#include "hetseg/segmentation.hpp"
#include "oracles.hpp"

using namespace hetseg;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

dgp::MonteCarloSummary mc(dgp::Design design, double delta, StatisticKind kind, std::size_t reps,
                          std::uint64_t seed) {
    TestConfig test;
    test.statistic = kind;
    return dgp::rejection_rate(dgp::simulation_design(design, dgp::ErrorFamily::Normal, 250, delta, 0.5, seed), test,
                               reps, seed);
}

Verdict size_homoscedastic() {
    const auto s = mc(dgp::Design::Homoscedastic, 0.0, StatisticKind::V_HET, 2000, 101);
    const bool ok = s.failures == 0 && s.rate >= 0.03 && s.rate <= 0.08;
    return {ok, fmt("V_HET rate %.4f (se %.4f, failures %zu), band [0.03, 0.08]", s.rate, s.standard_error,
                    s.failures)};
}

Verdict size_heteroscedastic() {
    const auto v = mc(dgp::Design::HeteroCovariateAndError, 0.0, StatisticKind::V_HET, 2000, 202);
    const auto q = mc(dgp::Design::HeteroCovariateAndError, 0.0, StatisticKind::Q_HET, 2000, 202);
    const bool ok = v.failures == 0 && q.failures == 0 && v.rate >= 0.03 && v.rate <= 0.09 && q.rate <= 0.12;
    return {ok, fmt("V_HET rate %.4f (se %.4f) band [0.03, 0.09]; Q_HET rate %.4f (se %.4f) <= 0.12", v.rate,
                    v.standard_error, q.rate, q.standard_error)};
}

Verdict power_ordering() {
    const std::vector<double> deltas{0.3, 0.6, 0.9, 1.2, 1.5};
    std::vector<dgp::MonteCarloSummary> runs;
    for (double d : deltas) runs.push_back(mc(dgp::Design::HeteroCovariateAndError, d, StatisticKind::V_HET, 1000, 303));
    bool ok = runs.back().rate >= 0.8;
    std::ostringstream detail;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        ok = ok && runs[i].failures == 0;
        detail << (i ? ", " : "rates ") << fmt("%.1f:%.3f", deltas[i], runs[i].rate);
        if (i > 0) {
            const double se = std::hypot(runs[i].standard_error, runs[i - 1].standard_error);
            ok = ok && runs[i].rate > runs[i - 1].rate - 2.0 * se;
        }
    }
    return {ok, detail.str()};
}

Verdict vostrikova_vs_ou() {
    const double horizon = 2.0 * std::log(250.0);
    bool ok = true;
    std::ostringstream detail;
    std::uint64_t seed = 400;
    for (int r : {1, 2}) {
        for (double x : {2.8, 3.2, 3.6}) {
            const double formula = vostrikova_tail(x, horizon, r);
            const TailEstimate sim = simulate_ou_sup_tail(x, horizon, r, 50000, ++seed, 0.005);
            const double z = std::abs(formula - sim.probability) / sim.standard_error;
            ok = ok && z <= 3.0;
            detail << fmt("[r=%d x=%.1f formula %.4f sim %.4f z %.1f] ", r, x, formula, sim.probability, z);
        }
    }
    return {ok, detail.str()};
}

Verdict kolmogorov_quantile() {
    // full spectrum: a truncated expansion is too smooth to reach the bridge's supremum
    const KLBasis basis = kl_decompose(brownian_bridge_kernel(1), midpoint_grid(1024), 1024);
    const double q = simulate_weighted_limit_quantile(basis, WeightSpec{0.0}, Norm::Euclidean, 0.05, 20000, 505);
    return {std::abs(q - 1.358) <= 0.02, fmt("95%% point %.4f, target 1.358 +- 0.02", q)};
}

Verdict lrv_oracle() {
    std::mt19937_64 gen(606);
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const Eigen::Index n = 20 + 3 * c;
        const Eigen::Index d = 1 + c % 3;
        const Matrix v = oracle::random_matrix(gen, n, d);
        const bool bartlett = c % 2 == 0;
        const double h = 1.0 + 0.7 * c;
        const LrvPath lrv = lrv_path(v, KernelSpec{bartlett ? KernelKind::Bartlett : KernelKind::Parzen, h});
        for (Eigen::Index k = 1; k <= n; ++k) {
            const Matrix ref = bartlett ? oracle::g_direct(v, k, h, oracle::bartlett)
                                        : oracle::g_direct(v, k, h, oracle::parzen);
            worst = std::max(worst, (lrv.g[static_cast<std::size_t>(k)] - ref).cwiseAbs().maxCoeff());
        }
    }
    return {worst <= 1e-10, fmt("max abs deviation %.3e over 20 instances", worst)};
}

Verdict drift_oracle() {
    const auto config =
        dgp::simulation_design(dgp::Design::HeteroCovariateAndError, dgp::ErrorFamily::Normal, 20000, 1.0, 0.5, 707);
    const Dataset data = dgp::generate(config);
    const CusumPath path = cusum_path(data, fit_ols(data));
    const dgp::DriftOracle oracle = dgp::drift_oracle_for(config);
    const double root_n = std::sqrt(static_cast<double>(data.n()));
    double worst = 0.0, peak = 0.0;
    for (std::size_t k = 0; k <= path.n(); ++k) {
        const Vector g = dgp::theoretical_drift(oracle, static_cast<double>(k) / static_cast<double>(path.n()));
        worst = std::max(worst, (path.row(k).transpose() / root_n - g).norm());
        peak = std::max(peak, g.norm());
    }
    return {worst < 0.1, fmt("sup deviation %.4f (drift peak %.4f), bound 0.1", worst, peak)};
}

Verdict invariants() {
    std::vector<std::string> failed;
    auto check = [&](bool ok, const char* name) {
        if (!ok) failed.emplace_back(name);
    };

    bool scale_ok = true, dominance_ok = true;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset data = dgp::generate(
            dgp::simulation_design(dgp::Design::HeteroCovariateAndError, dgp::ErrorFamily::AR, 200, 0.5 * (s % 3), 0.5, s));
        Matrix x = data.x();
        x.col(1) *= 13.0;
        const Dataset scaled(x, 0.3 * data.y(), true);
        for (auto kind : {StatisticKind::V_HET, StatisticKind::V_HO}) {
            TestConfig c;
            c.statistic = kind;
            c.kernel.bandwidth = 3.0;
            const double a = run_test(data, c).statistic, b = run_test(scaled, c).statistic;
            scale_ok = scale_ok && std::abs(a - b) <= 1e-8 * a;
        }
        TestConfig v, q;
        q.statistic = StatisticKind::Q_HET;
        dominance_ok = dominance_ok && run_test(data, v).statistic >= run_test(data, q).statistic;
    }
    check(scale_ok, "scale invariance");
    check(dominance_ok, "V >= Q");

    std::mt19937_64 gen(808);
    bool ends_ok = true, psd_ok = true, u_ok = true;
    for (int c = 0; c < 10; ++c) {
        const Dataset data = oracle::random_dataset(gen, 30 + 9 * c, 1 + c % 3);
        const CusumPath path = cusum_path(data, fit_ols(data));
        ends_ok = ends_ok && path.row(0).norm() == 0.0 && path.row(path.n()).norm() < 1e-12 * (1.0 + path.values().norm());
        const LrvPath lrv = lrv_path(oracle::random_matrix(gen, 40 + c, 2), KernelSpec{KernelKind::Bartlett, 2.0 + c});
        for (const Matrix& g : lrv.g) {
            psd_ok = psd_ok && (g - g.transpose()).norm() < 1e-14;
            if (g.trace() > 0)
                psd_ok = psd_ok && Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff() >= -1e-10 * g.trace();
        }
        const Dataset flat(Matrix::Ones(30 + c, 1), oracle::random_matrix(gen, 30 + c, 1).col(0), true);
        for (const Matrix& u : design_cusum_u(flat, fit_ols(flat))) u_ok = u_ok && u.cwiseAbs().maxCoeff() < 1e-14;
    }
    check(ends_ok, "CUSUM endpoints");
    check(psd_ok, "G_N symmetric PSD");
    check(u_ok, "u_N zero for constant design");

    int recovered = 0;
    bool depth_ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        dgp::DgpConfig c;
        c.n = 600;
        c.coefficients = {{0.33, 0.66}, {Vector::Constant(2, 1.0), Vector::Constant(2, 2.5), Vector::Constant(2, 1.0)}};
        c.seed = stream_seed(809, static_cast<std::uint64_t>(rep));
        const SegmentationResult r = binary_segment(dgp::generate(c), SegmentationConfig{});
        for (const SegmentTest& t : r.reports) depth_ok = depth_ok && static_cast<double>(t.depth) <= std::log2(600.0 / 20.0) + 1.0;
        recovered += r.change_points.size() == 2 && std::abs(static_cast<double>(r.change_points[0]) - 198.0) <= 30.0 &&
                     std::abs(static_cast<double>(r.change_points[1]) - 396.0) <= 30.0;
    }
    check(depth_ok, "segmentation termination");
    check(recovered >= 80, "two-break recovery");

    std::string detail = fmt("two-break recovery %d/100", recovered);
    for (const auto& f : failed) detail += "; failed: " + f;
    return {failed.empty(), detail};
}

Verdict location_accuracy() {
    const auto s = mc(dgp::Design::HeteroCovariateAndError, 1.5, StatisticKind::V_HET, 1000, 909);
    std::size_t close = 0;
    for (std::size_t k : s.argmax_indices) close += std::abs(static_cast<double>(k) / 250.0 - 0.5) < 0.05;
    const double share = static_cast<double>(close) / static_cast<double>(s.argmax_indices.size());
    return {s.failures == 0 && share >= 0.9, fmt("share within 0.05: %.3f of %zu", share, s.argmax_indices.size())};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria{
        size_homoscedastic, size_heteroscedastic, power_ordering, vostrikova_vs_ou, kolmogorov_quantile,
        lrv_oracle,         drift_oracle,         invariants,     location_accuracy};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(c);
    }
    if (selected.empty()) {
        for (int c = 1; c <= 9; ++c) selected.push_back(c);
    }

    bool all = true;
    for (int c : selected) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[static_cast<std::size_t>(c - 1)]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", c, v.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
