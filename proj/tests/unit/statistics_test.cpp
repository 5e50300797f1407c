#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hetseg/error.hpp"
#include "hetseg/lrv.hpp"
#include "hetseg/statistics.hpp"
#include "oracles.hpp"

using namespace hetseg;

namespace {

CusumPath random_path(std::mt19937_64& gen, std::size_t n, std::size_t d) {
    Matrix z = oracle::random_matrix(gen, static_cast<Eigen::Index>(n) + 1, static_cast<Eigen::Index>(d));
    z.row(0).setZero();
    z.row(static_cast<Eigen::Index>(n)).setZero();
    return CusumPath(z, n);
}

}  // namespace

TEST(WeightSpec, ValuesAndValidation) {
    EXPECT_EQ(WeightSpec{0.0}(0.3), 1.0);
    EXPECT_DOUBLE_EQ(WeightSpec{0.5}(0.5), 0.5);
    EXPECT_DOUBLE_EQ(WeightSpec{0.25}(0.2), std::pow(0.16, 0.25));
    EXPECT_TRUE(WeightSpec{0.5}.standardized());
    EXPECT_FALSE(WeightSpec{0.49}.standardized());
    EXPECT_HETSEG_ERROR(WeightSpec{0.6}.validate(), InvalidConfig);
    EXPECT_HETSEG_ERROR(WeightSpec{-0.1}.validate(), InvalidConfig);
}

TEST(TrimMin, Values) {
    EXPECT_EQ(trim_min(1), 2U);
    EXPECT_EQ(trim_min(2), 3U);
    EXPECT_EQ(trim_min(5), 6U);
}

TEST(WeightedSup, ZeroPath) {
    const CusumPath path(Matrix::Zero(21, 2), 20);
    const SupResult r = weighted_sup(path, WeightSpec{0.0}, Standardizer::identity(2), Norm::Euclidean);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.argmax_index, 1U);
    const SupResult s = weighted_sup(path, WeightSpec{0.5}, Standardizer::identity(2), Norm::Max);
    EXPECT_EQ(s.argmax_index, trim_min(2));
}

TEST(WeightedSup, UnweightedReducesToMaxAbs) {
    std::mt19937_64 gen(1);
    const CusumPath path = random_path(gen, 30, 1);
    const SupResult r = weighted_sup(path, WeightSpec{0.0}, Standardizer::identity(1), Norm::Euclidean);
    Eigen::Index arg = 0;
    const double ref = path.values().col(0).cwiseAbs().maxCoeff(&arg);
    EXPECT_DOUBLE_EQ(r.statistic, ref);
    EXPECT_EQ(r.argmax_index, static_cast<std::size_t>(arg));
}

TEST(WeightedSup, MatchesDirectLoopWithExplicitInverse) {
    std::mt19937_64 gen(2);
    const CusumPath path = random_path(gen, 30, 2);
    Matrix s(2, 2);
    s << 2.0, 0.3, 0.3, 0.7;
    const SupResult r = weighted_sup(path, WeightSpec{0.25}, Standardizer::constant(s), Norm::Euclidean);
    EXPECT_NEAR(r.statistic, oracle::weighted_sup_direct(path.values(), s, 0.25), 1e-10);
}

TEST(WeightedSup, StandardizedFixedMatrixUsesTrimmedGridAndWeight) {
    std::mt19937_64 gen(3);
    const CusumPath path = random_path(gen, 40, 2);
    const SupResult r = weighted_sup(path, WeightSpec{0.5}, Standardizer::identity(2), Norm::Euclidean);
    double best = -1.0;
    for (std::size_t k = 3; k <= 37; ++k) {
        const double t = path.t(k);
        best = std::max(best, path.row(k).norm() / std::sqrt(t * (1 - t)));
    }
    EXPECT_NEAR(r.statistic, best, 1e-12);
}

TEST(WeightedSup, PathStandardizerSkipsIndefiniteEntries) {
    std::mt19937_64 gen(4);
    const CusumPath path = random_path(gen, 20, 2);
    MatrixPath s(21, Matrix::Identity(2, 2));
    s[7] = Matrix::Identity(2, 2) * 1e-6;  // would dominate if kept
    s[7](1, 1) = -1.0;
    const auto profile = weighted_profile(path, WeightSpec{0.5}, Standardizer::path(s), Norm::Euclidean);
    EXPECT_FALSE(profile[7].has_value());
    EXPECT_TRUE(profile[8].has_value());
    const SupResult r = weighted_sup(path, WeightSpec{0.5}, Standardizer::path(s), Norm::Euclidean);
    EXPECT_NE(r.argmax_index, 7U);
    MatrixPath all_bad(21, -Matrix::Identity(2, 2));
    EXPECT_HETSEG_ERROR(weighted_sup(path, WeightSpec{0.5}, Standardizer::path(all_bad), Norm::Euclidean),
                        SingularStandardizer);
}

TEST(WeightedProfile, EmptyOutsideGrid) {
    std::mt19937_64 gen(5);
    const CusumPath path = random_path(gen, 10, 1);
    const auto p = weighted_profile(path, WeightSpec{0.5}, Standardizer::identity(1), Norm::Euclidean);
    ASSERT_EQ(p.size(), 11U);
    EXPECT_FALSE(p[0] || p[1] || p[9] || p[10]);
    for (std::size_t k = 2; k <= 8; ++k) EXPECT_TRUE(p[k].has_value());
}

TEST(Linalg, RidgeAndInverseSqrt) {
    Matrix s(2, 2);
    s << 4.0, 1.0, 1.0, 3.0;
    const Matrix r = linalg::inverse_sqrt(s);
    EXPECT_LT((r * s * r - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((r - r.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    const Matrix ridged = linalg::ridge_regularize(singular);
    EXPECT_NEAR(ridged(1, 1), linalg::kRidgeLambda * 0.5, 1e-20);
    EXPECT_HETSEG_ERROR(linalg::ridge_regularize(Matrix::Zero(2, 2)), SingularStandardizer);
    EXPECT_TRUE(linalg::indefinite(-Matrix::Identity(2, 2)));
    EXPECT_FALSE(linalg::indefinite(singular));
}

TEST(DeConstants, ClosedForms) {
    const double n = std::exp(std::numbers::e);
    const DeConstants d2 = de_constants(2, n);
    EXPECT_NEAR(d2.a, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(d2.b, 2.0, 1e-12);
    EXPECT_NEAR(de_constants(1, n).b, 2.0 - 0.5 * std::log(std::numbers::pi), 1e-12);
    EXPECT_NEAR(de_constants(1, n).b, 1.427635, 1e-6);
    EXPECT_HETSEG_ERROR(de_constants(1, 2.0), DomainError);
}

TEST(Vostrikova, FormulaValues) {
    EXPECT_NEAR(vostrikova_tail(3.0, 10.0, 2), 9 * std::exp(-4.5) / 2 * (10 - 20.0 / 9 + 4.0 / 9), 1e-14);
    EXPECT_NEAR(vostrikova_tail(3.0, 10.0, 2), 0.4110, 5e-5);
    EXPECT_NEAR(vostrikova_tail(3.0, 10.0, 1), 3 * std::exp(-4.5) / std::sqrt(2 * std::numbers::pi) * (10 - 10.0 / 9 + 4.0 / 9), 1e-14);
    EXPECT_NEAR(vostrikova_tail(3.0, 10.0, 1), 0.1241, 5e-5);
    double prev = 1.0;
    for (double x = 3.0; x < 12.0; x += 0.5) {
        const double p = vostrikova_tail(x, 10.0, 3);
        EXPECT_LT(p, prev);
        prev = p;
    }
    EXPECT_HETSEG_ERROR(vostrikova_tail(1.0, 10.0, 1), DomainError);
}

TEST(CriticalValue, VostrikovaRoots) {
    for (std::size_t d : {1U, 2U, 3U}) {
        const double x = critical_value(0.05, 250, d, CriticalMethod::VostrikovaV);
        EXPECT_NEAR(vostrikova_tail(x, 2 * std::log(250.0), static_cast<int>(d)), 0.05, 1e-8);
        const double q = critical_value(0.05, 250, d, CriticalMethod::VostrikovaQ);
        const double p1 = vostrikova_tail(q, 2 * std::log(250.0), 1);
        EXPECT_NEAR(1 - std::pow(1 - p1, static_cast<double>(d)), 0.05, 1e-8);
    }
}

TEST(CriticalValue, DarlingErdosClosedForm) {
    const double x_alpha = -std::log(-std::log(0.95) / 2.0);
    EXPECT_NEAR(x_alpha, 3.663, 5e-4);
    const DeConstants de = de_constants(2, 250.0);
    EXPECT_NEAR(critical_value(0.05, 250, 2, CriticalMethod::DarlingErdosV), (x_alpha + de.b) / de.a, 1e-12);
    const double xq = -std::log(-std::log(0.95) / 4.0);
    const DeConstants de1 = de_constants(1, 250.0);
    EXPECT_NEAR(critical_value(0.05, 250, 2, CriticalMethod::DarlingErdosQ), (xq + de1.b) / de1.a, 1e-12);
    CriticalOptions smooth;
    smooth.smooth_power = 1.0;
    const double xs = -std::log(-std::log(0.95) / (4.0 / 3.0));
    EXPECT_NEAR(critical_value(0.05, 250, 2, CriticalMethod::DarlingErdosV, smooth), (xs + de.b) / de.a, 1e-12);
}

TEST(CriticalValue, MonotoneInAlphaAndValidated) {
    for (auto m : {CriticalMethod::VostrikovaV, CriticalMethod::VostrikovaQ, CriticalMethod::DarlingErdosV,
                   CriticalMethod::DarlingErdosQ}) {
        EXPECT_GT(critical_value(0.01, 250, 2, m), critical_value(0.05, 250, 2, m));
        EXPECT_GT(critical_value(0.05, 1000, 2, m), critical_value(0.05, 250, 2, m));
        const double cv = critical_value(0.05, 250, 2, m);
        EXPECT_NEAR(approximate_p_value(cv, 250, 2, m), 0.05, 1e-7);
    }
    EXPECT_HETSEG_ERROR(critical_value(0.0, 250, 2, CriticalMethod::VostrikovaV), DomainError);
    EXPECT_HETSEG_ERROR(critical_value(0.6, 250, 2, CriticalMethod::VostrikovaV), DomainError);
    EXPECT_HETSEG_ERROR(critical_value(0.05, 10, 2, CriticalMethod::VostrikovaV), DomainError);
}
