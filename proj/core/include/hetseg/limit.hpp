#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hetseg/linalg.hpp"
#include "hetseg/lrv.hpp"
#include "hetseg/statistics.hpp"

namespace hetseg {

/// Matrix-valued covariance function (t, s) -> d x d on [0, 1]^2.
class CovarianceKernel {
public:
    using Function = std::function<Matrix(double, double)>;

    CovarianceKernel(std::size_t d, Function fn) : d_(d), fn_(std::move(fn)) {}

    [[nodiscard]] std::size_t d() const noexcept { return d_; }
    [[nodiscard]] Matrix operator()(double t, double s) const { return fn_(t, s); }

private:
    std::size_t d_;
    Function fn_;
};

/// (min(t, s) - t s) I_d, the covariance of d independent Brownian bridges.
[[nodiscard]] CovarianceKernel brownian_bridge_kernel(std::size_t d);

/// Plug-in covariance of the limit process of the CUSUM under heteroscedasticity,
///   G(min) - tG(s) - u(t)G(s) - sG(t) + stG(1) + s u(t)G(1)
///     - G(t)u(s)^T + tG(1)u(s)^T + u(t)G(1)u(s)^T,
/// with G_N and u_N from `lrv` held constant between grid indices.
/// Requires lrv.g and lrv.u to be populated.
[[nodiscard]] CovarianceKernel build_bar_g_kernel(const LrvPath& lrv);

/// M midpoints (m + 1/2) / M of [0, 1].
[[nodiscard]] Vector midpoint_grid(std::size_t m);

/// Truncated Karhunen-Loeve basis of a kernel on a grid.
struct KLBasis {
    Vector grid;
    Vector eigenvalues;    ///< descending, floored at 0; length L
    Matrix eigenfunctions; ///< (M d) x L; row m*d + j is coordinate j at grid[m]
    std::size_t d = 1;

    [[nodiscard]] std::size_t truncation() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    [[nodiscard]] double dt() const noexcept { return 1.0 / static_cast<double>(grid.size()); }
    /// phi_l(grid[m]) as a d-vector.
    [[nodiscard]] Vector phi(std::size_t l, std::size_t m) const;
};

inline constexpr std::size_t kDefaultKlGrid = 512;
inline constexpr std::size_t kDefaultKlTruncation = 5;

/// Top-L eigenpairs of the stacked (M d) x (M d) Gram matrix scaled by dt.
/// Throws NotPSD if the smallest eigenvalue is below -1e-6 * trace.
[[nodiscard]] KLBasis kl_decompose(const CovarianceKernel& kernel, const Vector& grid, std::size_t truncation);

/// -zeta(1/2) / sqrt(2 pi): the Broadie-Glasserman-Kou shift between the maximum of
/// a diffusion over a grid and over continuous time, per unit of step standard deviation.
inline constexpr double kContinuityShift = 0.5825971579390106;

/// sup_m ||sum_l sqrt(lambda_l) N_l phi_l(t_m)|| / w(t_m) for each of `reps`
/// replications; replication r draws from stream_seed(seed, r). Each supremum is
/// shifted by kContinuityShift times the standard deviation of the simulated
/// process's one-step increment at the argmax (along the maximizing direction),
/// which removes the O(M^{-1/2}) grid bias for rough (large-L) expansions and
/// is negligible for smooth, heavily truncated ones.
[[nodiscard]] std::vector<double> simulate_weighted_limit_sample(const KLBasis& basis, const WeightSpec& weight,
                                                                 Norm norm, std::size_t reps, std::uint64_t seed);

/// Empirical (1 - alpha)-quantile of simulate_weighted_limit_sample. Needs reps >= 1000.
[[nodiscard]] double simulate_weighted_limit_quantile(const KLBasis& basis, const WeightSpec& weight, Norm norm,
                                                      double alpha, std::size_t reps, std::uint64_t seed);

struct TailEstimate {
    double probability = 0.0;
    double standard_error = 0.0;
    std::size_t reps = 0;
};

inline constexpr double kDefaultOuStep = 0.005;

/// Grid: maximum over the grid points only (biased low by O(dt^{1/2})).
/// BridgeCorrected: between grid points the norm is treated as a unit-diffusion
/// Brownian bridge and its maximum is drawn exactly, one uniform per step.
enum class OuSampling { Grid, BridgeCorrected };

/// Sample of sup_{0<=t<=T} U*_r(t), U_i independent stationary OU processes with
/// E U(x) U(y) = exp(-|x - y| / 2), discretized exactly as an AR(1) with
/// correlation exp(-dt/2). Requires dt <= 0.01.
[[nodiscard]] std::vector<double> simulate_ou_sup_sample(double horizon, int r, std::size_t reps,
                                                         std::uint64_t seed, double dt = kDefaultOuStep,
                                                         OuSampling sampling = OuSampling::BridgeCorrected);

[[nodiscard]] TailEstimate simulate_ou_sup_tail(double x, double horizon, int r, std::size_t reps,
                                                std::uint64_t seed, double dt = kDefaultOuStep,
                                                OuSampling sampling = OuSampling::BridgeCorrected);

/// Sample of sup_{c1<=t<=1-c2} (sum_i B_i(t)^2 / (t(1-t)))^{1/2} with B_i
/// independent Brownian bridges simulated on the grid j/n, j = 0..n.
[[nodiscard]] std::vector<double> simulate_trimmed_bridge_sup(std::size_t n, std::size_t d, double c1, double c2,
                                                              std::size_t reps, std::uint64_t seed);

/// sup_u ||Psi(u)||^2 / (u^{2 a1} (1-u)^{2 a2}), Psi_k(u) = W_k(h(u)) - u W_k(h(1)),
/// with the time change h(u) given on the grid u = j/N by `h_path` (length N + 1).
[[nodiscard]] std::vector<double> simulate_psi_sup(const Vector& h_path, std::size_t d, double alpha1,
                                                   double alpha2, std::size_t reps, std::uint64_t seed);

/// sup_k Z_k^T ((1/N) X^T X)^{-1} Z_k / (u^{2 a1} (1-u)^{2 a2}), u = k/N, k = 1..N-1:
/// the statistic whose limit simulate_psi_sup approximates.
[[nodiscard]] double psi_statistic(const CusumPath& path, const Matrix& xtx_over_n, double alpha1, double alpha2);

/// Type-7 (linear interpolation) empirical quantile.
[[nodiscard]] double empirical_quantile(std::vector<double> sample, double prob);

}  // namespace hetseg
