#pragma once

#include <cstddef>

#include "hetseg/linalg.hpp"

namespace hetseg {

/// Design matrix X (N x d) and response y (N) of the linear model
/// y_i = x_i^T beta + eps_i, rows in time order.
class Dataset {
public:
    /// Validates shapes, finiteness and, if `has_intercept`, that column 0 is
    /// exactly the all-ones vector. The N >= d + 2 requirement is enforced by
    /// fit_ols, so that small files can still be loaded and inspected.
    Dataset(Matrix x, Vector y, bool has_intercept);

    [[nodiscard]] const Matrix& x() const noexcept { return x_; }
    [[nodiscard]] const Vector& y() const noexcept { return y_; }
    [[nodiscard]] bool has_intercept() const noexcept { return has_intercept_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(x_.rows()); }
    [[nodiscard]] std::size_t d() const noexcept { return static_cast<std::size_t>(x_.cols()); }

    /// Rows [first, first + count) as a new dataset (0-based).
    [[nodiscard]] Dataset slice(std::size_t first, std::size_t count) const;

private:
    Matrix x_;
    Vector y_;
    bool has_intercept_;
};

struct RegressionFit {
    Vector beta_hat;
    Vector residuals;
    Matrix xtx;    ///< X^T X
    double scale;  ///< sample standard deviation of the residuals
};

/// Least squares through a column-pivoting Householder QR of X.
/// Throws RankDeficient when rcond(X^T X) <= 1e-12, InsufficientData when N < d + 2.
[[nodiscard]] RegressionFit fit_ols(const Dataset& data);

inline constexpr double kRankTolerance = 1e-12;

/// Z_N(k/(N+1)) for k = 0..N stored row-wise:
///   Z_k = N^{-1/2} (S_k - (k/N) S_N),  S_k = sum_{i<=k} x_i e_i.
class CusumPath {
public:
    CusumPath(Matrix values, std::size_t n);

    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] auto row(std::size_t k) const { return values_.row(static_cast<Eigen::Index>(k)); }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t d() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    /// Grid point t_k = k / (N + 1).
    [[nodiscard]] double t(std::size_t k) const noexcept {
        return static_cast<double>(k) / static_cast<double>(n_ + 1);
    }

private:
    Matrix values_;
    std::size_t n_;
};

[[nodiscard]] CusumPath cusum_path(const Dataset& data, const RegressionFit& fit);

/// Rows x_i * e_i of the covariate-weighted residual series (N x d).
[[nodiscard]] Matrix weighted_residuals(const Dataset& data, const RegressionFit& fit);

}  // namespace hetseg
