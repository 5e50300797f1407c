#include "hetseg/lrv.hpp"

#include <algorithm>
#include <cmath>

#include "hetseg/error.hpp"

namespace hetseg {

double kernel_weight(const KernelSpec& spec, double u) noexcept {
    const double a = std::abs(u);
    if (a > KernelSpec::support()) return 0.0;
    switch (spec.kind) {
        case KernelKind::Bartlett:
            return 1.0 - a;
        case KernelKind::Parzen:
            if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
            return 2.0 * (1.0 - a) * (1.0 - a) * (1.0 - a);
    }
    return 0.0;
}

double andrews_bandwidth(const Matrix& series, const KernelSpec& spec) {
    const auto n = series.rows();
    if (n < 10) {
        throw Error(ErrorKind::InsufficientData, "Andrews bandwidth needs at least 10 observations");
    }
    constexpr double kRhoBound = 0.97;
    double numerator = 0.0;
    double denominator = 0.0;
    for (Eigen::Index j = 0; j < series.cols(); ++j) {
        const Vector v = series.col(j).array() - series.col(j).mean();
        if (v.squaredNorm() <= 0.0) continue;
        const double lagged_ss = v.head(n - 1).squaredNorm();
        if (lagged_ss <= 0.0) continue;
        double rho = v.tail(n - 1).dot(v.head(n - 1)) / lagged_ss;
        rho = std::clamp(rho, -kRhoBound, kRhoBound);
        const double sigma2 = (v.tail(n - 1) - rho * v.head(n - 1)).squaredNorm() / static_cast<double>(n - 1);
        if (sigma2 <= 0.0) continue;
        const double s4 = sigma2 * sigma2;
        if (spec.kind == KernelKind::Bartlett) {
            numerator += 4.0 * rho * rho * s4 / (std::pow(1.0 - rho, 6) * std::pow(1.0 + rho, 2));
        } else {
            numerator += 4.0 * rho * rho * s4 / std::pow(1.0 - rho, 8);
        }
        denominator += s4 / std::pow(1.0 - rho, 4);
    }
    if (denominator <= 0.0) {
        throw Error(ErrorKind::DegenerateSeries, "every coordinate series has zero variance");
    }
    const double alpha = numerator / denominator;
    const double nd = static_cast<double>(n);
    const double h = spec.kind == KernelKind::Bartlett ? 1.1447 * std::cbrt(alpha * nd)
                                                       : 2.6614 * std::pow(alpha * nd, 0.2);
    return std::clamp(h, 1.0, 5.0 * std::cbrt(nd));
}

LrvPath lrv_path(const Matrix& series, const KernelSpec& spec, LagNormalization d_norm) {
    const auto n = series.rows();
    const auto d = series.cols();
    LrvPath out;
    out.h_used = spec.bandwidth ? *spec.bandwidth : andrews_bandwidth(series, spec);
    if (!(out.h_used > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "bandwidth must be positive");
    }
    if (out.h_used >= static_cast<double>(n)) {
        throw Error(ErrorKind::BandwidthTooLarge, "bandwidth " + std::to_string(out.h_used) +
                                                      " is not below N=" + std::to_string(n));
    }
    // Lags l >= h carry zero weight for kernels supported on [-1, 1].
    const auto max_lag = static_cast<Eigen::Index>(std::ceil(out.h_used)) - 1;
    std::vector<double> weight(static_cast<std::size_t>(max_lag) + 1);
    for (Eigen::Index l = 0; l <= max_lag; ++l) {
        weight[static_cast<std::size_t>(l)] = kernel_weight(spec, static_cast<double>(l) / out.h_used);
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    out.g.assign(static_cast<std::size_t>(n) + 1, Matrix::Zero(d, d));
    // g[k] = g[k-1] + (1/N) [v_k v_k^T + sum_{l>=1} K(l/h) (v_{k-l} v_k^T + v_k v_{k-l}^T)]
    Matrix cross(d, d);
    for (Eigen::Index k = 1; k <= n; ++k) {
        const auto vk = series.row(k - 1);
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
        const Eigen::Index lags = std::min<Eigen::Index>(max_lag, k - 1);
        for (Eigen::Index l = 1; l <= lags; ++l) {
            acc.noalias() += weight[static_cast<std::size_t>(l)] * series.row(k - 1 - l);
        }
        cross.noalias() = acc.transpose() * vk;
        Matrix& gk = out.g[static_cast<std::size_t>(k)];
        gk = out.g[static_cast<std::size_t>(k - 1)];
        gk.noalias() += inv_n * (vk.transpose() * vk);
        gk += inv_n * (cross + cross.transpose());
    }

    out.d_full = Matrix::Zero(d, d);
    for (Eigen::Index l = 0; l <= std::min<Eigen::Index>(max_lag, n - 1); ++l) {
        const double norm = d_norm == LagNormalization::PerLag ? 1.0 / static_cast<double>(n - l) : inv_n;
        const Matrix gamma = norm * (series.topRows(n - l).transpose() * series.bottomRows(n - l));
        const double w = weight[static_cast<std::size_t>(l)];
        if (l == 0) {
            out.d_full += gamma;
        } else {
            out.d_full += w * (gamma + gamma.transpose());
        }
    }
    return out;
}

MatrixPath design_cusum_u(const Dataset& data, const RegressionFit& fit) {
    const auto n = data.n();
    const auto d = static_cast<Eigen::Index>(data.d());
    if (linalg::reciprocal_condition(fit.xtx) <= kRankTolerance) {
        throw Error(ErrorKind::RankDeficient, "X^T X is numerically singular");
    }
    const Matrix xtx_inv = fit.xtx.ldlt().solve(Matrix::Identity(d, d));
    MatrixPath u(n + 1, Matrix::Zero(d, d));
    Matrix prefix = Matrix::Zero(d, d);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto xk = data.x().row(static_cast<Eigen::Index>(k - 1));
        prefix.noalias() += xk.transpose() * xk;
        const double share = static_cast<double>(k) / static_cast<double>(n);
        u[k].noalias() = (prefix - share * fit.xtx) * xtx_inv;
    }
    // Exact centering at the right endpoint.
    u[n].setZero();
    return u;
}

LrvPath plugin_g_tilde(LrvPath lrv) {
    const std::size_t n = lrv.n();
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty long-run covariance path");
    const Matrix& g_end = lrv.g[n];
    lrv.g_tilde.assign(n + 1, Matrix::Zero(g_end.rows(), g_end.cols()));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n);
        lrv.g_tilde[k] = (1.0 - 2.0 * t) * lrv.g[k] + t * t * g_end;
    }
    return lrv;
}

SmoothVarianceEstimates smooth_variance_estimates(const Dataset& data, const RegressionFit& fit) {
    const auto n = data.n();
    const auto d = static_cast<Eigen::Index>(data.d());
    if (static_cast<std::size_t>(fit.residuals.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "fit does not belong to this dataset");
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    SmoothVarianceEstimates out;
    out.h_path = Vector::Zero(static_cast<Eigen::Index>(n) + 1);
    out.h_tilde.assign(n + 1, Matrix::Zero(d, d));
    for (std::size_t k = 1; k <= n; ++k) {
        const auto i = static_cast<Eigen::Index>(k - 1);
        const double e2 = fit.residuals(i) * fit.residuals(i);
        const auto xk = data.x().row(i);
        out.h_path(static_cast<Eigen::Index>(k)) = out.h_path(static_cast<Eigen::Index>(k - 1)) + inv_n * e2;
        out.h_tilde[k] = out.h_tilde[k - 1];
        out.h_tilde[k].noalias() += (inv_n * e2) * (xk.transpose() * xk);
    }
    out.xtx_over_n = inv_n * fit.xtx;
    return out;
}

Matrix SmoothVarianceEstimates::h_star(std::size_t k) const {
    const auto d = xtx_over_n.rows();
    return xtx_over_n.ldlt().solve(Matrix::Identity(d, d)) * h_path(static_cast<Eigen::Index>(k));
}

}  // namespace hetseg
