#pragma once

#include <cstddef>
#include <optional>

#include "hetseg/linalg.hpp"
#include "hetseg/regression.hpp"

namespace hetseg {

enum class KernelKind { Bartlett, Parzen };

struct KernelSpec {
    KernelKind kind = KernelKind::Bartlett;
    /// Fixed bandwidth h; std::nullopt selects the Andrews (1991) AR(1) plug-in.
    std::optional<double> bandwidth;

    /// rho in 0 < lim [1 - K(x)] / |x|^rho < inf.
    [[nodiscard]] double order() const noexcept { return kind == KernelKind::Bartlett ? 1.0 : 2.0; }
    /// Support bound c with K(u) = 0 for |u| > c.
    [[nodiscard]] static constexpr double support() noexcept { return 1.0; }
};

[[nodiscard]] double kernel_weight(const KernelSpec& spec, double u) noexcept;

/// Andrews' AR(1) plug-in bandwidth with equal weights across the columns of
/// `series` (N x d). Autocorrelations are clamped to [-0.97, 0.97] and the
/// result to [1, 5 N^{1/3}]. Throws DegenerateSeries if no column varies.
[[nodiscard]] double andrews_bandwidth(const Matrix& series, const KernelSpec& spec);

/// Per-lag normalization of the full-sample estimator D_N.
enum class LagNormalization {
    PerLag,     ///< 1 / (N - |l|)
    PerSample,  ///< 1 / N, matching the partial-sample path
};

/// Partial-sample long-run covariance path and companions. All paths are indexed
/// by k = 0..N (entry 0 is the zero matrix where it is not otherwise defined).
struct LrvPath {
    MatrixPath g;        ///< g[k] = G_N(k/N)
    MatrixPath u;        ///< u_N at t_k = k/(N+1); empty until filled by design_cusum_u
    MatrixPath g_tilde;  ///< (1 - 2 t) g[k] + t^2 g[N], t = k/N; empty until plugin_g_tilde
    Matrix d_full;       ///< full-sample D_N
    double h_used = 0.0;

    [[nodiscard]] std::size_t n() const noexcept { return g.empty() ? 0 : g.size() - 1; }
};

/// Fills g, d_full and h_used in O(N h d^2). Throws BandwidthTooLarge if h >= N.
[[nodiscard]] LrvPath lrv_path(const Matrix& series, const KernelSpec& spec,
                               LagNormalization d_norm = LagNormalization::PerLag);

/// (sum_{i<=k} x_i x_i^T - (k/N) sum_i x_i x_i^T) (X^T X)^{-1}, k = 0..N.
[[nodiscard]] MatrixPath design_cusum_u(const Dataset& data, const RegressionFit& fit);

/// Returns a copy of `lrv` with g_tilde populated.
[[nodiscard]] LrvPath plugin_g_tilde(LrvPath lrv);

struct SmoothVarianceEstimates {
    Vector h_path;        ///< h_path[k] = (1/N) sum_{j<=k} e_j^2, k = 0..N
    MatrixPath h_tilde;   ///< (1/N) sum_{j<=k} x_j x_j^T e_j^2, k = 0..N
    Matrix xtx_over_n;    ///< (1/N) X^T X

    /// H*_N(k/N) = ((1/N) X^T X)^{-1} h_path[k].
    [[nodiscard]] Matrix h_star(std::size_t k) const;
};

[[nodiscard]] SmoothVarianceEstimates smooth_variance_estimates(const Dataset& data,
                                                                const RegressionFit& fit);

}  // namespace hetseg
