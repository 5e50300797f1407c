#include <gtest/gtest.h>

#include <cmath>

#include "hetseg/dgp.hpp"
#include "hetseg/error.hpp"
#include "hetseg/limit.hpp"
#include "oracles.hpp"

using namespace hetseg;
using namespace hetseg::dgp;

namespace {

double sample_var(const Vector& v) {
    const double m = v.mean();
    return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

DriftOracle single_break_oracle(const Matrix& a0, double theta, const Vector& b1, const Vector& b2) {
    return DriftOracle{{{1.0, a0}}, CoefficientPath{{theta}, {b1, b2}}};
}

}  // namespace

TEST(SmoothScale, Midpoint) {
    EXPECT_DOUBLE_EQ(smooth_scale(0.5), 2.0);
    EXPECT_NEAR(smooth_scale(0.0), 1.0 + 2.0 / (1.0 + std::exp(5.0)), 1e-15);
    EXPECT_LT(smooth_scale(0.2), smooth_scale(0.8));
}

TEST(Generate, DeterministicBitForBit) {
    const DgpConfig c = simulation_design(Design::HeteroCovariateAndError, ErrorFamily::GARCH, 300, 0.5, 0.5, 99);
    const Dataset a = generate(c);
    const Dataset b = generate(c);
    EXPECT_EQ(a.x(), b.x());
    EXPECT_EQ(a.y(), b.y());
    DgpConfig other = c;
    other.seed = 100;
    EXPECT_NE(generate(other).y(), a.y());
}

TEST(Generate, NullModelIsSingleRegression) {
    DgpConfig c = simulation_design(Design::Homoscedastic, ErrorFamily::Normal, 200, 0.0, 0.5, 1);
    const Dataset data = generate(c);
    Rng rng(1);
    Matrix x(200, 2);
    for (Eigen::Index i = 0; i < 200; ++i) x(i, 0) = 1.0, x(i, 1) = rng.normal();
    const Vector e = generate_errors(c.errors, 200, rng);
    EXPECT_EQ(data.x(), x);
    EXPECT_LT((data.y() - (x * Vector::Ones(2) + e)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Generate, CoefficientRegimesUseFloor) {
    DgpConfig c;
    c.n = 10;
    c.coefficients = {{0.35}, {Vector::Constant(1, 1.0), Vector::Constant(1, 5.0)}};
    c.covariates = CovariateModel{true, 0, {{1.0, 1.0}}};
    c.errors = HomoscedasticNormal{1e-30};
    const Dataset data = generate(c);
    for (Eigen::Index i = 0; i < 10; ++i) EXPECT_NEAR(data.y()(i), i < 3 ? 1.0 : 5.0, 1e-12) << i;
}

TEST(Generate, SwitchingVariance) {
    Rng rng(3);
    const Vector e = generate_errors(NormalSwitch{3.0, 0.5, 0.45}, 40000, rng);
    EXPECT_NEAR(sample_var(e.head(18000)), 3.0, 0.15);
    EXPECT_NEAR(sample_var(e.tail(22000)), 0.5, 0.03);
    Rng rng2(4);
    const Vector r = generate_errors(RatioScaled{NormalSwitch{0.5, 2.0, 0.5}, 4.0}, 40000, rng2);
    EXPECT_NEAR(sample_var(r.head(20000)), 2.0, 0.1);
    EXPECT_NEAR(sample_var(r.tail(20000)), 8.0, 0.4);
}

TEST(Generate, ArStationaryVariance) {
    Rng rng(5);
    const Vector e = generate_errors(HomoAr{0.5, 1.0}, 50000, rng);
    EXPECT_NEAR(sample_var(e), 1.0 / 0.75, 0.08);
    double lag = 0.0;
    for (Eigen::Index i = 1; i < e.size(); ++i) lag += e(i) * e(i - 1);
    EXPECT_NEAR(lag / (static_cast<double>(e.size()) * sample_var(e)), 0.5, 0.03);
}

TEST(Generate, GarchUnconditionalVariance) {
    for (auto [omega, a, b] : {std::tuple{0.1, 0.01, 0.9}, std::tuple{3.0, 0.01, 0.8}}) {
        Rng rng(6);
        const Vector e = generate_errors(HomoGarch{omega, a, b}, 50000, rng);
        const double target = omega / (1.0 - a - b);
        EXPECT_NEAR(sample_var(e), target, 0.1 * target);
    }
}

TEST(Generate, StreamIndependence) {
    DgpConfig c = simulation_design(Design::Homoscedastic, ErrorFamily::Normal, 1000, 0.0, 0.5, 0);
    double total = 0.0;
    const int pairs = 20;
    for (int p = 0; p < pairs; ++p) {
        c.seed = stream_seed(17, 2 * p);
        const Vector e1 = generate(c).y();
        c.seed = stream_seed(17, 2 * p + 1);
        const Vector e2 = generate(c).y();
        const double corr = ((e1.array() - e1.mean()) * (e2.array() - e2.mean())).sum() /
                            std::sqrt(sample_var(e1) * sample_var(e2)) / 999.0;
        EXPECT_LT(std::abs(corr), 0.15);
        total += std::abs(corr);
    }
    EXPECT_LT(total / pairs, 0.05);
}

TEST(Validate, RejectsBadConfigs) {
    DgpConfig c = simulation_design(Design::Homoscedastic, ErrorFamily::GARCH, 100, 0.0, 0.5, 0);
    c.errors = HomoGarch{0.1, 0.5, 0.6};
    EXPECT_HETSEG_ERROR(c.validate(), InvalidConfig);
    c.errors = NormalSwitch{1.0, 1.0, 1.2};
    EXPECT_HETSEG_ERROR(generate(c), InvalidConfig);
    c = simulation_design(Design::Homoscedastic, ErrorFamily::Normal, 100, 0.0, 0.5, 0);
    c.coefficients = {{0.6, 0.4}, {Vector::Ones(2), Vector::Ones(2), Vector::Ones(2)}};
    EXPECT_HETSEG_ERROR(c.validate(), InvalidConfig);
    c.coefficients = {{0.5}, {Vector::Ones(3), Vector::Ones(3)}};
    EXPECT_HETSEG_ERROR(c.validate(), InvalidConfig);
}

TEST(Drift, ConstantCoefficientsGiveZero) {
    const DriftOracle o{{{0.4, Matrix::Identity(2, 2)}, {1.0, 4.0 * Matrix::Identity(2, 2)}},
                        CoefficientPath{{}, {Vector::Ones(2)}}};
    for (double t : {0.0, 0.3, 0.7, 1.0}) EXPECT_LT(theoretical_drift(o, t).norm(), 1e-14);
}

TEST(Drift, SingleBreakClosedForm) {
    Matrix a0(2, 2);
    a0 << 1.0, 0.3, 0.3, 2.0;
    const Vector b1 = Vector::Ones(2), b2 = 2.5 * Vector::Ones(2);
    const double theta = 0.4;
    const DriftOracle o = single_break_oracle(a0, theta, b1, b2);
    EXPECT_LT((o.beta_star() - (theta * b1 + (1 - theta) * b2)).norm(), 1e-14);
    for (double t : {0.1, 0.25, 0.4}) {
        EXPECT_LT((theoretical_drift(o, t) - t * (1 - theta) * a0 * (b1 - b2)).norm(), 1e-14);
    }
    for (double t : {0.6, 0.9}) {
        EXPECT_LT((theoretical_drift(o, t) - theta * (1 - t) * a0 * (b1 - b2)).norm(), 1e-14);
    }
    EXPECT_LT(theoretical_drift(o, 1.0).norm(), 1e-14);
}

TEST(Drift, OracleForSimulationDesign) {
    const DgpConfig c = simulation_design(Design::HeteroCovariateAndError, ErrorFamily::Normal, 1000, 1.0, 0.5, 0);
    const DriftOracle o = drift_oracle_for(c);
    ASSERT_EQ(o.a_segments.size(), 2U);
    EXPECT_DOUBLE_EQ(o.a_segments[0].a(1, 1), 9.0);
    EXPECT_DOUBLE_EQ(o.a_segments[1].a(1, 1), 0.25);
    EXPECT_DOUBLE_EQ(o.a_segments[1].a(0, 0), 1.0);
    const Vector bs = o.beta_star();
    EXPECT_NEAR(bs(0), 1.5, 1e-12);
    EXPECT_NEAR(bs(1), (9 * 0.45 + 0.25 * 0.05 + 0.25 * 0.5 * 2) / (9 * 0.45 + 0.25 * 0.55), 1e-12);
    DriftOracle bad = o;
    bad.a_segments[0].a(0, 1) = 5.0;
    EXPECT_HETSEG_ERROR(bad.validate(), InvalidConfig);
}

TEST(RejectionRate, ReproducibleAndMonotoneInDelta) {
    const TestConfig test{};
    const DgpConfig null = simulation_design(Design::HeteroCovariateAndError, ErrorFamily::Normal, 250, 0.0, 0.5, 0);
    const MonteCarloSummary a = rejection_rate(null, test, 100, 12);
    const MonteCarloSummary b = rejection_rate(null, test, 100, 12);
    EXPECT_EQ(a.rate, b.rate);
    EXPECT_EQ(a.argmax_indices, b.argmax_indices);
    EXPECT_EQ(a.failures, 0U);
    EXPECT_EQ(a.reps, 100U);
    const MonteCarloSummary lo =
        rejection_rate(simulation_design(Design::HeteroCovariateAndError, ErrorFamily::Normal, 250, 0.3, 0.5, 0), test, 200, 5);
    const MonteCarloSummary hi =
        rejection_rate(simulation_design(Design::HeteroCovariateAndError, ErrorFamily::Normal, 250, 1.5, 0.5, 0), test, 200, 5);
    EXPECT_GT(hi.rate, lo.rate);
    EXPECT_NEAR(hi.standard_error, std::sqrt(hi.rate * (1 - hi.rate) / 200.0), 1e-12);
    EXPECT_HETSEG_ERROR(rejection_rate(null, test, 50, 1), InvalidConfig);
}

TEST(SimulationDesign, ShapesAndFamilies) {
    for (Design d : {Design::HeteroCovariateAndError, Design::Homoscedastic, Design::HeteroError,
                     Design::HeteroCovariate, Design::RatioScaledError}) {
        for (ErrorFamily f : {ErrorFamily::Normal, ErrorFamily::AR, ErrorFamily::GARCH}) {
            const DgpConfig c = simulation_design(d, f, 120, 0.5, 0.5, 1, 2.0);
            EXPECT_NO_THROW(c.validate());
            const Dataset data = generate(c);
            EXPECT_EQ(data.n(), 120U);
            EXPECT_EQ(data.d(), 2U);
            EXPECT_TRUE(data.has_intercept());
        }
    }
}

TEST(NullDistribution, UpperQuantileNearVostrikovaValue) {
    std::vector<double> stats;
    for (std::uint64_t r = 0; r < 2000; ++r) {
        const DgpConfig c = simulation_design(Design::Homoscedastic, ErrorFamily::Normal, 500, 0.0, 0.5, stream_seed(31, r));
        stats.push_back(run_test(generate(c), TestConfig{}).statistic);
    }
    const double q = empirical_quantile(stats, 0.95);
    EXPECT_NEAR(q, critical_value(0.05, 500, 2, CriticalMethod::VostrikovaV), 0.15);
}
