#include "hetseg/regression.hpp"

#include <cmath>
#include <string>

#include "hetseg/error.hpp"

namespace hetseg {

Dataset::Dataset(Matrix x, Vector y, bool has_intercept)
    : x_(std::move(x)), y_(std::move(y)), has_intercept_(has_intercept) {
    if (y_.size() != x_.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "response has " + std::to_string(y_.size()) +
                                                      " entries but design has " +
                                                      std::to_string(x_.rows()) + " rows");
    }
    if (x_.rows() == 0 || x_.cols() == 0) {
        throw Error(ErrorKind::InsufficientData, "empty design matrix");
    }
    if (!x_.allFinite() || !y_.allFinite()) {
        throw Error(ErrorKind::InvalidConfig, "dataset contains non-finite values");
    }
    if (has_intercept_ && !(x_.col(0).array() == 1.0).all()) {
        throw Error(ErrorKind::InvalidConfig, "intercept flagged but column 1 is not all ones");
    }
}

Dataset Dataset::slice(std::size_t first, std::size_t count) const {
    if (first + count > n()) {
        throw Error(ErrorKind::DimensionMismatch, "slice exceeds sample");
    }
    const auto f = static_cast<Eigen::Index>(first);
    const auto c = static_cast<Eigen::Index>(count);
    return Dataset(x_.middleRows(f, c), y_.segment(f, c), has_intercept_);
}

RegressionFit fit_ols(const Dataset& data) {
    const auto n = data.n();
    const auto d = data.d();
    if (n < d + 2) {
        throw Error(ErrorKind::InsufficientData,
                    "need N >= d + 2 observations, got N=" + std::to_string(n) + ", d=" + std::to_string(d));
    }
    RegressionFit fit;
    fit.xtx = Matrix(d, d).setZero();
    fit.xtx.selfadjointView<Eigen::Lower>().rankUpdate(data.x().transpose());
    fit.xtx = fit.xtx.selfadjointView<Eigen::Lower>();
    if (linalg::reciprocal_condition(fit.xtx) <= kRankTolerance) {
        throw Error(ErrorKind::RankDeficient, "X^T X is numerically singular");
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(data.x());
    fit.beta_hat = qr.solve(data.y());
    fit.residuals = data.y() - data.x() * fit.beta_hat;
    const double mean = fit.residuals.mean();
    fit.scale = std::sqrt((fit.residuals.array() - mean).square().sum() / static_cast<double>(n - 1));
    return fit;
}

CusumPath::CusumPath(Matrix values, std::size_t n) : values_(std::move(values)), n_(n) {
    if (static_cast<std::size_t>(values_.rows()) != n_ + 1) {
        throw Error(ErrorKind::DimensionMismatch, "CUSUM path must have N + 1 rows");
    }
}

Matrix weighted_residuals(const Dataset& data, const RegressionFit& fit) {
    if (static_cast<std::size_t>(fit.residuals.size()) != data.n()) {
        throw Error(ErrorKind::DimensionMismatch, "fit does not belong to this dataset");
    }
    return data.x().array().colwise() * fit.residuals.array();
}

CusumPath cusum_path(const Dataset& data, const RegressionFit& fit) {
    const Matrix v = weighted_residuals(data, fit);
    const auto n = static_cast<Eigen::Index>(data.n());
    const auto d = static_cast<Eigen::Index>(data.d());
    const double root_n = std::sqrt(static_cast<double>(n));

    Matrix prefix(n + 1, d);
    prefix.row(0).setZero();
    for (Eigen::Index k = 1; k <= n; ++k) prefix.row(k) = prefix.row(k - 1) + v.row(k - 1);

    const Eigen::RowVectorXd total = prefix.row(n);
    Matrix z(n + 1, d);
    for (Eigen::Index k = 0; k <= n; ++k) {
        z.row(k) = (prefix.row(k) - (static_cast<double>(k) / static_cast<double>(n)) * total) / root_n;
    }
    return CusumPath(std::move(z), data.n());
}

}  // namespace hetseg
