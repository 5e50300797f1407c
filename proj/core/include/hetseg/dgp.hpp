#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "hetseg/linalg.hpp"
#include "hetseg/procedure.hpp"
#include "hetseg/regression.hpp"
#include "hetseg/rng.hpp"

namespace hetseg::dgp {

/// Coefficient regimes: betas[r] applies to k_{r-1} < i <= k_r with
/// k_r = floor(breaks[r-1] * N), k_0 = 0, k_{R+1} = N.
struct CoefficientPath {
    std::vector<double> breaks;
    std::vector<Vector> betas;  ///< breaks.size() + 1 vectors of length d
};

// Error models. Variances refer to N(0, v) innovations; m_star is the fraction
// at which the variance switches (regime 1 for i <= floor(m_star N)).
struct NormalSwitch { double var_pre; double var_post; double m_star; };
struct ArSwitch { double phi; double var_pre; double var_post; double m_star; };
struct GarchSwitch { double omega_pre; double omega_post; double a; double b; double m_star; };
/// e_i = g(i/N) z_i with g(u) = 1 + 2 / (1 + exp(-10 (u - 1/2))).
struct HeteroSmooth {};
struct HomoscedasticNormal { double var; };
struct HomoAr { double phi; double var; };
struct HomoGarch { double omega; double a; double b; };
/// Base model with every variance (or GARCH intercept) multiplied by r.
struct RatioScaled {
    std::variant<NormalSwitch, ArSwitch, GarchSwitch> base;
    double r;
};

using ErrorModel = std::variant<NormalSwitch, ArSwitch, GarchSwitch, HeteroSmooth, HomoscedasticNormal, HomoAr,
                                HomoGarch, RatioScaled>;

/// Smooth variance profile used by HeteroSmooth.
[[nodiscard]] double smooth_scale(double u) noexcept;

struct CovariateRegime {
    double end_fraction;  ///< regime covers i <= floor(end_fraction * N); the last one must be 1
    double sd;
};

/// Optional intercept followed by `regressors` independent mean-zero normal
/// columns whose standard deviation follows `regimes`.
struct CovariateModel {
    bool intercept = true;
    std::size_t regressors = 1;
    std::vector<CovariateRegime> regimes{{1.0, 1.0}};

    [[nodiscard]] std::size_t d() const noexcept { return regressors + (intercept ? 1 : 0); }
};

[[nodiscard]] CovariateModel iid_normal(double sd, std::size_t regressors = 1, bool intercept = true);
[[nodiscard]] CovariateModel segmented_normal(std::vector<CovariateRegime> regimes, std::size_t regressors = 1,
                                              bool intercept = true);

struct DgpConfig {
    std::size_t n = 250;
    CoefficientPath coefficients;
    ErrorModel errors = HomoscedasticNormal{1.0};
    CovariateModel covariates;
    std::uint64_t seed = 0;

    /// Throws InvalidConfig on violated invariants (GARCH a + b < 1, increasing
    /// break fractions in (0, 1), m_star in (0, 1), matching dimensions, ...).
    void validate() const;
};

/// Draws covariates (row by row) and then errors from Rng(config.seed), so a
/// given config always yields the same dataset bit for bit. GARCH recursions
/// start at the stationary variance omega / (1 - a - b) of the first regime, AR
/// recursions from the stationary law of the first regime.
[[nodiscard]] Dataset generate(const DgpConfig& config);

/// The error sequence alone, drawn exactly as generate() draws it after the covariates.
[[nodiscard]] Vector generate_errors(const ErrorModel& model, std::size_t n, Rng& rng);

enum class Design {
    HeteroCovariateAndError,  ///< covariate sd 3 -> 0.5 and error variance 3 -> 0.5 at 0.45 N
    Homoscedastic,            ///< x2 ~ N(0, 1); errors N(0,1), AR(0.5), GARCH(0.1, 0.01, 0.9)
    HeteroError,              ///< x2 ~ N(0, 1); error variance 0.5 -> 2 at N/2
    HeteroCovariate,          ///< x2 variance 0.3 / 2 / 1 by thirds; errors as HeteroError
    RatioScaledError,         ///< HeteroCovariate with error variances scaled by `ratio`
};

enum class ErrorFamily { Normal, AR, GARCH, Smooth };

/// One-break simulation design y_i = x_i^T (1 + delta 1{i > k1}) (1, 1)^T + e_i
/// with x_i = (1, x_{2,i}) and k1 = floor(break_fraction N).
[[nodiscard]] DgpConfig simulation_design(Design design, ErrorFamily family, std::size_t n, double delta,
                                     double break_fraction, std::uint64_t seed, double ratio = 1.0);

struct MonteCarloSummary {
    double rate = 0.0;
    double standard_error = 0.0;
    std::size_t reps = 0;
    std::size_t failures = 0;  ///< replications that raised an Error; excluded from `rate`
    std::vector<std::size_t> argmax_indices;  ///< per successful replication, in replication order
};

/// Fraction of replications in which the test rejects. Replication r uses the
/// dataset generated with seed stream_seed(seed, r); results do not depend on
/// evaluation order. Requires reps >= 100.
[[nodiscard]] MonteCarloSummary rejection_rate(const DgpConfig& config, const TestConfig& test, std::size_t reps,
                                               std::uint64_t seed);

struct SecondMomentRegime {
    double end_fraction;
    Matrix a;  ///< E x x^T on the regime, symmetric positive definite
};

/// Population quantities under the alternative: A(u) and beta(u) piecewise constant.
struct DriftOracle {
    std::vector<SecondMomentRegime> a_segments;
    CoefficientPath coefficients;

    void validate() const;
    /// (int_0^1 A)^{-1} int_0^1 A(u) beta(u) du, the probability limit of the OLS estimate.
    [[nodiscard]] Vector beta_star() const;
};

/// Second-moment regimes implied by a covariate model.
[[nodiscard]] DriftOracle drift_oracle_for(const DgpConfig& config);

/// g(t) = C(t) - t C(1), C(t) = int_0^t A(u) (beta(u) - beta**) du.
[[nodiscard]] Vector theoretical_drift(const DriftOracle& oracle, double t);

}  // namespace hetseg::dgp
