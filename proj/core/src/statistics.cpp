#include "hetseg/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hetseg/error.hpp"

namespace hetseg {

double WeightSpec::operator()(double t) const {
    if (kappa == 0.0) return 1.0;
    return std::pow(t * (1.0 - t), kappa);
}

void WeightSpec::validate() const {
    if (!(kappa >= 0.0 && kappa <= 0.5)) {
        throw Error(ErrorKind::InvalidConfig, "kappa must lie in [0, 1/2]");
    }
}

Standardizer Standardizer::identity(std::size_t d) {
    Standardizer s;
    const auto n = static_cast<Eigen::Index>(d);
    s.fixed_inv_sqrt_ = Matrix::Identity(n, n);
    return s;
}

Standardizer Standardizer::constant(const Matrix& m) {
    Standardizer s;
    s.fixed_inv_sqrt_ = linalg::inverse_sqrt(m);
    return s;
}

Standardizer Standardizer::path(MatrixPath m) {
    if (m.empty()) throw Error(ErrorKind::DimensionMismatch, "empty standardizer path");
    Standardizer s;
    s.path_ = std::move(m);
    return s;
}

std::optional<Matrix> Standardizer::inverse_sqrt_at(std::size_t k) const {
    if (path_.empty()) return fixed_inv_sqrt_;
    if (k >= path_.size()) throw Error(ErrorKind::DimensionMismatch, "standardizer path too short");
    if (linalg::indefinite(path_[k])) return std::nullopt;
    return linalg::inverse_sqrt(path_[k]);
}

namespace {

struct Grid {
    std::size_t first;
    std::size_t last;
    bool unit_weight;
};

Grid admissible_grid(const CusumPath& path, const WeightSpec& weight, const Standardizer& s) {
    const std::size_t n = path.n();
    if (!weight.standardized()) {
        if (n < 2) throw Error(ErrorKind::InsufficientData, "CUSUM path too short");
        return {1, n - 1, weight.kappa == 0.0};
    }
    const std::size_t k_min = trim_min(path.d());
    if (n < 2 * k_min) {
        throw Error(ErrorKind::InsufficientData, "sample too short for the trimmed grid");
    }
    return {k_min, n - k_min, s.varies_with_k()};
}

double norm_of(const Eigen::VectorXd& v, Norm norm) {
    return norm == Norm::Euclidean ? v.norm() : v.cwiseAbs().maxCoeff();
}

std::optional<double> evaluate_at(const CusumPath& path, const WeightSpec& weight, const Standardizer& s,
                                  Norm norm, const Grid& grid, std::size_t k) {
    const auto inv_sqrt = s.inverse_sqrt_at(k);
    if (!inv_sqrt) return std::nullopt;
    const Eigen::VectorXd z = path.row(k).transpose();
    const Eigen::VectorXd v = *inv_sqrt * z;
    double value = norm_of(v, norm);
    if (!grid.unit_weight) {
        const double t = path.t(k);
        value /= weight.standardized() ? std::sqrt(t * (1.0 - t)) : weight(t);
    }
    return value;
}

}  // namespace

SupResult weighted_sup(const CusumPath& path, const WeightSpec& weight, const Standardizer& standardizer,
                       Norm norm) {
    weight.validate();
    const Grid grid = admissible_grid(path, weight, standardizer);
    SupResult best{-1.0, grid.first};
    for (std::size_t k = grid.first; k <= grid.last; ++k) {
        const auto value = evaluate_at(path, weight, standardizer, norm, grid, k);
        if (!value) continue;
        if (!std::isfinite(*value)) {
            throw Error(ErrorKind::SingularStandardizer, "non-finite standardized CUSUM at k=" + std::to_string(k));
        }
        if (*value > best.statistic) best = {*value, k};
    }
    if (best.statistic < 0.0) throw Error(ErrorKind::SingularStandardizer, "standardizer indefinite on the whole grid");
    return best;
}

std::vector<std::optional<double>> weighted_profile(const CusumPath& path, const WeightSpec& weight,
                                                    const Standardizer& standardizer, Norm norm) {
    weight.validate();
    const Grid grid = admissible_grid(path, weight, standardizer);
    std::vector<std::optional<double>> out(path.n() + 1);
    for (std::size_t k = grid.first; k <= grid.last; ++k) {
        out[k] = evaluate_at(path, weight, standardizer, norm, grid, k);
    }
    return out;
}

DeConstants de_constants(std::size_t d, double n) {
    if (d < 1) throw Error(ErrorKind::DomainError, "dimension must be positive");
    if (!(n > 1.0)) throw Error(ErrorKind::DomainError, "sample size must exceed 1");
    const double x = std::log(n);
    const double llx = std::log(x);
    if (!(llx > 0.0)) {
        throw Error(ErrorKind::DomainError, "log log n must be positive (n > e^e is not required, n > e is)");
    }
    const double dd = static_cast<double>(d);
    return {std::sqrt(2.0 * llx), 2.0 * llx + 0.5 * dd * std::log(llx) - std::lgamma(0.5 * dd)};
}

double vostrikova_tail(double x, double horizon, int r) {
    if (r < 1) throw Error(ErrorKind::DomainError, "r must be at least 1");
    if (!(horizon > 0.0)) throw Error(ErrorKind::DomainError, "horizon must be positive");
    const double rr = static_cast<double>(r);
    if (!(x > std::sqrt(rr))) throw Error(ErrorKind::DomainError, "Vostrikova tail requires x > sqrt(r)");
    const double x2 = x * x;
    const double log_lead = rr * std::log(x) - 0.5 * x2 - 0.5 * rr * std::numbers::ln2 - std::lgamma(0.5 * rr);
    const double bracket = horizon - rr * horizon / x2 + 4.0 / x2;
    const double p = std::exp(log_lead) * bracket;
    return std::clamp(p, 0.0, 1.0);
}

namespace {

double de_scale(std::size_t d, CriticalMethod method, const CriticalOptions& options) {
    if (method == CriticalMethod::DarlingErdosQ) return 2.0 * static_cast<double>(d);
    if (options.smooth_power) {
        const double rho = *options.smooth_power;
        if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidConfig, "smooth power must be non-negative");
        return (2.0 * rho + 2.0) / (2.0 * rho + 1.0);
    }
    return 2.0;
}

double vostrikova_exceedance(double x, double horizon, std::size_t d, CriticalMethod method) {
    if (method == CriticalMethod::VostrikovaV) return vostrikova_tail(x, horizon, static_cast<int>(d));
    const double p1 = vostrikova_tail(x, horizon, 1);
    return 1.0 - std::pow(1.0 - p1, static_cast<double>(d));
}

}  // namespace

double critical_value(double alpha, std::size_t n, std::size_t d, CriticalMethod method,
                      const CriticalOptions& options) {
    if (!(alpha > 0.0 && alpha <= 0.5)) throw Error(ErrorKind::DomainError, "alpha must lie in (0, 0.5]");
    if (n < 20) throw Error(ErrorKind::DomainError, "critical values need n >= 20");
    if (d < 1) throw Error(ErrorKind::DomainError, "dimension must be positive");
    const double log_n = std::log(static_cast<double>(n));

    switch (method) {
        case CriticalMethod::VostrikovaV:
        case CriticalMethod::VostrikovaQ: {
            const double horizon = 2.0 * log_n;
            const double root_r = method == CriticalMethod::VostrikovaV ? std::sqrt(static_cast<double>(d)) : 1.0;
            double lo = root_r + 0.1;
            double hi = 20.0;
            if (vostrikova_exceedance(lo, horizon, d, method) < alpha) {
                throw Error(ErrorKind::NoRoot, "tail probability at the bracket start is below alpha");
            }
            for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (vostrikova_exceedance(mid, horizon, d, method) >= alpha) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        case CriticalMethod::DarlingErdosV:
        case CriticalMethod::DarlingErdosQ: {
            const double c = de_scale(d, method, options);
            const double x_alpha = -std::log(-std::log1p(-alpha) / c);
            const DeConstants de = de_constants(method == CriticalMethod::DarlingErdosV ? d : 1,
                                                static_cast<double>(n));
            return (x_alpha + de.b) / de.a;
        }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown critical-value method");
}

double approximate_p_value(double statistic, std::size_t n, std::size_t d, CriticalMethod method,
                           const CriticalOptions& options) {
    const double log_n = std::log(static_cast<double>(n));
    switch (method) {
        case CriticalMethod::VostrikovaV:
        case CriticalMethod::VostrikovaQ: {
            const double root_r = method == CriticalMethod::VostrikovaV ? std::sqrt(static_cast<double>(d)) : 1.0;
            if (statistic <= root_r) return 1.0;
            return std::clamp(vostrikova_exceedance(statistic, 2.0 * log_n, d, method), 0.0, 1.0);
        }
        case CriticalMethod::DarlingErdosV:
        case CriticalMethod::DarlingErdosQ: {
            const double c = de_scale(d, method, options);
            const DeConstants de = de_constants(method == CriticalMethod::DarlingErdosV ? d : 1,
                                                static_cast<double>(n));
            const double x = de.a * statistic - de.b;
            return -std::expm1(-c * std::exp(-x));
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string_view to_string(CriticalMethod method) noexcept {
    switch (method) {
        case CriticalMethod::VostrikovaV: return "Vostrikova_V";
        case CriticalMethod::VostrikovaQ: return "Vostrikova_Q";
        case CriticalMethod::DarlingErdosV: return "DarlingErdos_V";
        case CriticalMethod::DarlingErdosQ: return "DarlingErdos_Q";
    }
    return "unknown";
}

}  // namespace hetseg
