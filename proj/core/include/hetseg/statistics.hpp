#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>

#include "hetseg/linalg.hpp"
#include "hetseg/regression.hpp"

namespace hetseg {

/// w(t) = (t (1 - t))^kappa, kappa in [0, 1/2]. kappa = 1/2 selects the
/// standardized (Darling-Erdos type) route.
struct WeightSpec {
    double kappa = 0.5;

    [[nodiscard]] bool standardized() const noexcept { return kappa == 0.5; }
    [[nodiscard]] double operator()(double t) const;
    void validate() const;
};

enum class Norm { Euclidean, Max };

/// Smallest admissible index of the trimmed grid [k_min, N - k_min] used
/// whenever the weight is (t(1-t))^{1/2}.
[[nodiscard]] constexpr std::size_t trim_min(std::size_t d) noexcept { return d + 1 > 2 ? d + 1 : 2; }

/// Matrices S_k the CUSUM is standardized by before taking norms.
class Standardizer {
public:
    [[nodiscard]] static Standardizer identity(std::size_t d);
    /// One matrix for every k, e.g. the full-sample D_N.
    [[nodiscard]] static Standardizer constant(const Matrix& s);
    /// S_k = path[k], e.g. G~_N(t_k). Indices where S_k is indefinite are
    /// dropped from the supremum.
    [[nodiscard]] static Standardizer path(MatrixPath s);

    [[nodiscard]] bool varies_with_k() const noexcept { return !path_.empty(); }
    /// Symmetric S_k^{-1/2}, or std::nullopt where a path entry is indefinite.
    [[nodiscard]] std::optional<Matrix> inverse_sqrt_at(std::size_t k) const;

private:
    Matrix fixed_inv_sqrt_;
    MatrixPath path_;
};

struct SupResult {
    double statistic = 0.0;
    std::size_t argmax_index = 0;
};

/// sup_k ||S_k^{-1/2} Z_k|| / w(t_k) over the admissible grid:
///   kappa < 1/2          k = 1..N-1, t_k = k/(N+1)
///   kappa = 1/2, path S  k = k_min..N-k_min, w == 1
///   kappa = 1/2, fixed S k = k_min..N-k_min, w = (t(1-t))^{1/2}
/// The Euclidean norm of S^{-1/2}Z equals (Z^T S^{-1} Z)^{1/2}. Throws
/// SingularStandardizer when no grid index has a usable standardizer.
[[nodiscard]] SupResult weighted_sup(const CusumPath& path, const WeightSpec& weight,
                                     const Standardizer& standardizer, Norm norm);

/// Per-index values ||S_k^{-1/2} Z_k|| / w(t_k) on the admissible grid, std::nullopt elsewhere.
[[nodiscard]] std::vector<std::optional<double>> weighted_profile(const CusumPath& path,
                                                                  const WeightSpec& weight,
                                                                  const Standardizer& standardizer,
                                                                  Norm norm);

struct DeConstants {
    double a;
    double b;
};

/// a(log n) and b_d(log n) with a(x) = (2 log x)^{1/2},
/// b_d(x) = 2 log x + (d/2) log log x - log Gamma(d/2). `n` may be non-integer.
[[nodiscard]] DeConstants de_constants(std::size_t d, double n);

/// Vostrikova's approximation of P{sup_{0<=t<=T} U*_r(t) > x} with the
/// O(x^-4) term dropped, clamped to [0, 1]. Throws DomainError for x <= sqrt(r).
[[nodiscard]] double vostrikova_tail(double x, double horizon, int r);

enum class CriticalMethod { VostrikovaV, VostrikovaQ, DarlingErdosV, DarlingErdosQ };

struct CriticalOptions {
    /// When set, the Darling-Erdos limit exp(-c e^{-x}) uses
    /// c = (2 rho + 2) / (2 rho + 1) for a power-law variance g(t) = c t^rho
    /// instead of c = 2. Only meaningful for DarlingErdosV.
    std::optional<double> smooth_power;
};

/// Critical value at level alpha for sample size n and dimension d. The
/// Vostrikova routes use the horizon T = log N^2 = 2 log n.
[[nodiscard]] double critical_value(double alpha, std::size_t n, std::size_t d, CriticalMethod method,
                                    const CriticalOptions& options = {});

/// Approximate p-value of `statistic` from the same source as the critical value.
[[nodiscard]] double approximate_p_value(double statistic, std::size_t n, std::size_t d,
                                         CriticalMethod method, const CriticalOptions& options = {});

[[nodiscard]] std::string_view to_string(CriticalMethod method) noexcept;

}  // namespace hetseg
