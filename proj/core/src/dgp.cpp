#include "hetseg/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetseg/error.hpp"

namespace hetseg::dgp {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

std::size_t floor_index(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

void check_fraction(double f, const char* name) {
    require(std::isfinite(f) && f > 0.0 && f < 1.0, std::string(name) + " must lie in (0, 1)");
}

void check_garch(double omega_pre, double omega_post, double a, double b) {
    require(omega_pre > 0.0 && omega_post > 0.0, "GARCH intercepts must be positive");
    require(a >= 0.0 && b >= 0.0 && a + b < 1.0, "GARCH coefficients need a, b >= 0 and a + b < 1");
}

void check_model(const ErrorModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, NormalSwitch>) {
                require(m.var_pre > 0.0 && m.var_post > 0.0, "error variances must be positive");
                check_fraction(m.m_star, "m_star");
            } else if constexpr (std::is_same_v<T, ArSwitch>) {
                require(std::abs(m.phi) < 1.0, "AR coefficient must satisfy |phi| < 1");
                require(m.var_pre > 0.0 && m.var_post > 0.0, "error variances must be positive");
                check_fraction(m.m_star, "m_star");
            } else if constexpr (std::is_same_v<T, GarchSwitch>) {
                check_garch(m.omega_pre, m.omega_post, m.a, m.b);
                check_fraction(m.m_star, "m_star");
            } else if constexpr (std::is_same_v<T, HomoscedasticNormal>) {
                require(m.var > 0.0, "error variance must be positive");
            } else if constexpr (std::is_same_v<T, HomoAr>) {
                require(std::abs(m.phi) < 1.0, "AR coefficient must satisfy |phi| < 1");
                require(m.var > 0.0, "error variance must be positive");
            } else if constexpr (std::is_same_v<T, HomoGarch>) {
                check_garch(m.omega, m.omega, m.a, m.b);
            } else if constexpr (std::is_same_v<T, RatioScaled>) {
                require(std::isfinite(m.r) && m.r > 0.0, "variance ratio must be positive");
                std::visit([](const auto& base) { check_model(ErrorModel{base}); }, m.base);
            }
        },
        model);
}

// Switch-type models reduce to one recursion with two regimes.
struct Regimes {
    enum class Kind { Normal, Ar, Garch } kind;
    double phi = 0.0;
    double pre = 1.0;  // variance, or GARCH intercept
    double post = 1.0;
    double a = 0.0;
    double b = 0.0;
    std::size_t m = 0;  // last index (1-based) of the first regime
};

Regimes regimes_of(const ErrorModel& model, std::size_t n) {
    return std::visit(
        [n](const auto& m) -> Regimes {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, NormalSwitch>) {
                return {Regimes::Kind::Normal, 0.0, m.var_pre, m.var_post, 0.0, 0.0, floor_index(m.m_star, n)};
            } else if constexpr (std::is_same_v<T, ArSwitch>) {
                return {Regimes::Kind::Ar, m.phi, m.var_pre, m.var_post, 0.0, 0.0, floor_index(m.m_star, n)};
            } else if constexpr (std::is_same_v<T, GarchSwitch>) {
                return {Regimes::Kind::Garch, 0.0, m.omega_pre, m.omega_post, m.a, m.b, floor_index(m.m_star, n)};
            } else if constexpr (std::is_same_v<T, HomoscedasticNormal>) {
                return {Regimes::Kind::Normal, 0.0, m.var, m.var, 0.0, 0.0, n};
            } else if constexpr (std::is_same_v<T, HomoAr>) {
                return {Regimes::Kind::Ar, m.phi, m.var, m.var, 0.0, 0.0, n};
            } else if constexpr (std::is_same_v<T, HomoGarch>) {
                return {Regimes::Kind::Garch, 0.0, m.omega, m.omega, m.a, m.b, n};
            } else if constexpr (std::is_same_v<T, RatioScaled>) {
                Regimes r = std::visit([n](const auto& base) { return regimes_of(ErrorModel{base}, n); }, m.base);
                r.pre *= m.r;
                r.post *= m.r;
                return r;
            } else {
                throw Error(ErrorKind::InvalidConfig, "no regime form for this error model");
            }
        },
        model);
}

}  // namespace

double smooth_scale(double u) noexcept { return 1.0 + 2.0 / (1.0 + std::exp(-10.0 * (u - 0.5))); }

CovariateModel iid_normal(double sd, std::size_t regressors, bool intercept) {
    return CovariateModel{intercept, regressors, {{1.0, sd}}};
}

CovariateModel segmented_normal(std::vector<CovariateRegime> regimes, std::size_t regressors, bool intercept) {
    return CovariateModel{intercept, regressors, std::move(regimes)};
}

void DgpConfig::validate() const {
    require(n >= 1, "sample size must be positive");
    const std::size_t d = covariates.d();
    require(d >= 1, "the design needs at least one column");
    require(!covariates.regimes.empty(), "covariate model needs at least one regime");
    double prev = 0.0;
    for (const auto& reg : covariates.regimes) {
        require(reg.end_fraction > prev && reg.end_fraction <= 1.0, "covariate regime ends must increase within (0, 1]");
        require(std::isfinite(reg.sd) && reg.sd > 0.0, "covariate standard deviations must be positive");
        prev = reg.end_fraction;
    }
    require(covariates.regimes.back().end_fraction == 1.0, "the last covariate regime must end at 1");
    require(coefficients.betas.size() == coefficients.breaks.size() + 1,
            "need one coefficient vector per regime");
    prev = 0.0;
    for (double br : coefficients.breaks) {
        check_fraction(br, "break fraction");
        require(br > prev, "break fractions must be strictly increasing");
        prev = br;
    }
    for (const auto& beta : coefficients.betas) {
        require(static_cast<std::size_t>(beta.size()) == d, "coefficient length must equal the design dimension");
        require(beta.allFinite(), "coefficients must be finite");
    }
    if (std::holds_alternative<RatioScaled>(errors)) {
        const auto& rs = std::get<RatioScaled>(errors);
        require(std::isfinite(rs.r) && rs.r > 0.0, "variance ratio must be positive");
    }
    check_model(errors);
}

Vector generate_errors(const ErrorModel& model, std::size_t n, Rng& rng) {
    Vector e(static_cast<Eigen::Index>(n));
    if (std::holds_alternative<HeteroSmooth>(model)) {
        for (std::size_t i = 1; i <= n; ++i)
            e(static_cast<Eigen::Index>(i - 1)) = smooth_scale(static_cast<double>(i) / static_cast<double>(n)) * rng.normal();
        return e;
    }
    const Regimes r = regimes_of(model, n);
    switch (r.kind) {
        case Regimes::Kind::Normal:
            for (std::size_t i = 1; i <= n; ++i)
                e(static_cast<Eigen::Index>(i - 1)) = std::sqrt(i <= r.m ? r.pre : r.post) * rng.normal();
            break;
        case Regimes::Kind::Ar: {
            double prev = std::sqrt(r.pre / (1.0 - r.phi * r.phi)) * rng.normal();
            for (std::size_t i = 1; i <= n; ++i) {
                prev = r.phi * prev + std::sqrt(i <= r.m ? r.pre : r.post) * rng.normal();
                e(static_cast<Eigen::Index>(i - 1)) = prev;
            }
            break;
        }
        case Regimes::Kind::Garch: {
            double h = r.pre / (1.0 - r.a - r.b);
            double prev = std::sqrt(h) * rng.normal();
            for (std::size_t i = 1; i <= n; ++i) {
                h = (i <= r.m ? r.pre : r.post) + r.a * prev * prev + r.b * h;
                prev = std::sqrt(h) * rng.normal();
                e(static_cast<Eigen::Index>(i - 1)) = prev;
            }
            break;
        }
    }
    return e;
}

Dataset generate(const DgpConfig& config) {
    config.validate();
    const std::size_t n = config.n;
    const std::size_t d = config.covariates.d();
    const auto& cov = config.covariates;
    Rng rng(config.seed);

    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::size_t regime = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        while (i > floor_index(cov.regimes[regime].end_fraction, n) && regime + 1 < cov.regimes.size()) ++regime;
        const auto row = static_cast<Eigen::Index>(i - 1);
        Eigen::Index col = 0;
        if (cov.intercept) x(row, col++) = 1.0;
        for (std::size_t j = 0; j < cov.regressors; ++j) x(row, col++) = cov.regimes[regime].sd * rng.normal();
    }

    const Vector e = generate_errors(config.errors, n, rng);

    const auto& coef = config.coefficients;
    Vector y(static_cast<Eigen::Index>(n));
    std::size_t seg = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        while (seg < coef.breaks.size() && i > floor_index(coef.breaks[seg], n)) ++seg;
        const auto row = static_cast<Eigen::Index>(i - 1);
        y(row) = x.row(row).dot(coef.betas[seg]) + e(row);
    }
    return Dataset(std::move(x), std::move(y), cov.intercept);
}

DgpConfig simulation_design(Design design, ErrorFamily family, std::size_t n, double delta, double break_fraction,
                       std::uint64_t seed, double ratio) {
    DgpConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    const Vector beta1 = Vector::Ones(2);
    cfg.coefficients = CoefficientPath{{break_fraction}, {beta1, Vector::Constant(2, 1.0 + delta)}};

    switch (design) {
        case Design::HeteroCovariateAndError:
            cfg.covariates = segmented_normal({{0.45, 3.0}, {1.0, 0.5}});
            switch (family) {
                case ErrorFamily::Normal: cfg.errors = NormalSwitch{3.0, 0.5, 0.45}; break;
                case ErrorFamily::AR: cfg.errors = ArSwitch{0.3, 3.0, 0.5, 0.45}; break;
                case ErrorFamily::GARCH: cfg.errors = GarchSwitch{3.0, 0.5, 0.01, 0.8, 0.45}; break;
                case ErrorFamily::Smooth: cfg.errors = HeteroSmooth{}; break;
            }
            break;
        case Design::Homoscedastic:
            cfg.covariates = iid_normal(1.0);
            switch (family) {
                case ErrorFamily::Normal: cfg.errors = HomoscedasticNormal{1.0}; break;
                case ErrorFamily::AR: cfg.errors = HomoAr{0.5, 1.0}; break;
                case ErrorFamily::GARCH: cfg.errors = HomoGarch{0.1, 0.01, 0.9}; break;
                case ErrorFamily::Smooth: cfg.errors = HeteroSmooth{}; break;
            }
            break;
        case Design::HeteroError:
        case Design::HeteroCovariate:
        case Design::RatioScaledError: {
            cfg.covariates = design == Design::HeteroError
                                 ? iid_normal(1.0)
                                 : segmented_normal({{1.0 / 3.0, std::sqrt(0.3)}, {2.0 / 3.0, std::sqrt(2.0)}, {1.0, 1.0}});
            std::variant<NormalSwitch, ArSwitch, GarchSwitch> base;
            switch (family) {
                case ErrorFamily::Normal: base = NormalSwitch{0.5, 2.0, 0.5}; break;
                case ErrorFamily::AR: base = ArSwitch{0.5, 0.5, 2.0, 0.5}; break;
                case ErrorFamily::GARCH: base = GarchSwitch{0.5, 2.0, 0.01, 0.9, 0.5}; break;
                case ErrorFamily::Smooth: cfg.errors = HeteroSmooth{}; return cfg;
            }
            if (design == Design::RatioScaledError)
                cfg.errors = RatioScaled{base, ratio};
            else
                cfg.errors = std::visit([](const auto& b) { return ErrorModel{b}; }, base);
            break;
        }
    }
    return cfg;
}

MonteCarloSummary rejection_rate(const DgpConfig& config, const TestConfig& test, std::size_t reps,
                                 std::uint64_t seed) {
    require(reps >= 100, "rejection_rate needs at least 100 replications");
    config.validate();
    test.validate();
    MonteCarloSummary out;
    out.reps = reps;
    std::size_t rejections = 0;
    DgpConfig rep_cfg = config;
    for (std::size_t r = 0; r < reps; ++r) {
        rep_cfg.seed = stream_seed(seed, r);
        try {
            const TestReport report = run_test(generate(rep_cfg), test);
            if (report.reject) ++rejections;
            out.argmax_indices.push_back(report.argmax_index);
        } catch (const Error&) {
            ++out.failures;
        }
    }
    const std::size_t ok = reps - out.failures;
    if (ok > 0) {
        out.rate = static_cast<double>(rejections) / static_cast<double>(ok);
        out.standard_error = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(ok));
    }
    return out;
}

void DriftOracle::validate() const {
    require(!a_segments.empty(), "drift oracle needs at least one second-moment regime");
    double prev = 0.0;
    for (const auto& seg : a_segments) {
        require(seg.end_fraction > prev && seg.end_fraction <= 1.0, "second-moment regime ends must increase");
        prev = seg.end_fraction;
        require(seg.a.rows() == seg.a.cols() && seg.a.rows() == a_segments.front().a.rows(),
                "second-moment matrices must be square and of equal size");
        require((seg.a - seg.a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + seg.a.cwiseAbs().maxCoeff()),
                "second-moment matrices must be symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix> es(seg.a, Eigen::EigenvaluesOnly);
        require(es.eigenvalues().minCoeff() > 0.0, "second-moment matrices must be positive definite");
    }
    require(a_segments.back().end_fraction == 1.0, "the last second-moment regime must end at 1");
    require(coefficients.betas.size() == coefficients.breaks.size() + 1, "need one coefficient vector per regime");
    for (const auto& beta : coefficients.betas)
        require(beta.size() == a_segments.front().a.rows(), "coefficient length must match A");
    prev = 0.0;
    for (double br : coefficients.breaks) {
        check_fraction(br, "break fraction");
        require(br > prev, "break fractions must be strictly increasing");
        prev = br;
    }
}

namespace {

// Pieces on which both A(u) and beta(u) are constant.
struct Piece {
    double lo;
    double hi;
    const Matrix* a;
    const Vector* beta;
};

std::vector<Piece> pieces(const DriftOracle& o) {
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& s : o.a_segments) cuts.push_back(s.end_fraction);
    for (double b : o.coefficients.breaks) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        std::size_t ia = 0;
        while (mid > o.a_segments[ia].end_fraction) ++ia;
        std::size_t ib = 0;
        while (ib < o.coefficients.breaks.size() && mid > o.coefficients.breaks[ib]) ++ib;
        out.push_back({cuts[i], cuts[i + 1], &o.a_segments[ia].a, &o.coefficients.betas[ib]});
    }
    return out;
}

Vector cumulative(const std::vector<Piece>& ps, const Vector& beta_star, double t) {
    Vector c = Vector::Zero(beta_star.size());
    for (const auto& p : ps) {
        const double len = std::min(p.hi, t) - p.lo;
        if (len <= 0.0) break;
        c += len * (*p.a) * (*p.beta - beta_star);
    }
    return c;
}

}  // namespace

Vector DriftOracle::beta_star() const {
    validate();
    const auto ps = pieces(*this);
    const auto d = a_segments.front().a.rows();
    Matrix int_a = Matrix::Zero(d, d);
    Vector int_ab = Vector::Zero(d);
    for (const auto& p : ps) {
        int_a += (p.hi - p.lo) * (*p.a);
        int_ab += (p.hi - p.lo) * (*p.a) * (*p.beta);
    }
    return int_a.llt().solve(int_ab);
}

DriftOracle drift_oracle_for(const DgpConfig& config) {
    config.validate();
    DriftOracle o;
    o.coefficients = config.coefficients;
    const auto& cov = config.covariates;
    const auto d = static_cast<Eigen::Index>(cov.d());
    for (const auto& reg : cov.regimes) {
        Matrix a = Matrix::Identity(d, d) * (reg.sd * reg.sd);
        if (cov.intercept) a(0, 0) = 1.0;
        o.a_segments.push_back({reg.end_fraction, std::move(a)});
    }
    return o;
}

Vector theoretical_drift(const DriftOracle& oracle, double t) {
    require(t >= 0.0 && t <= 1.0, "drift is defined for t in [0, 1]");
    const Vector bs = oracle.beta_star();
    const auto ps = pieces(oracle);
    return cumulative(ps, bs, t) - t * cumulative(ps, bs, 1.0);
}

}  // namespace hetseg::dgp
