#include "hetseg/limit.hpp"

#include <algorithm>
#include <cmath>

#include "hetseg/error.hpp"
#include "hetseg/rng.hpp"

namespace hetseg {

CovarianceKernel brownian_bridge_kernel(std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d);
    return CovarianceKernel(d, [dd](double t, double s) -> Matrix {
        return (std::min(t, s) - t * s) * Matrix::Identity(dd, dd);
    });
}

CovarianceKernel build_bar_g_kernel(const LrvPath& lrv) {
    const std::size_t n = lrv.n();
    if (n == 0 || lrv.u.size() != n + 1) {
        throw Error(ErrorKind::DimensionMismatch, "kernel needs both the G_N and u_N paths");
    }
    const std::size_t d = static_cast<std::size_t>(lrv.g[n].rows());
    auto index = [](double t, double scale, std::size_t last) {
        const double k = std::floor(scale * t);
        if (k <= 0.0) return std::size_t{0};
        return std::min(last, static_cast<std::size_t>(k));
    };
    return CovarianceKernel(d, [g = lrv.g, u = lrv.u, n, index](double t, double s) -> Matrix {
        const double nd = static_cast<double>(n);
        const Matrix& g_t = g[index(t, nd, n)];
        const Matrix& g_s = g[index(s, nd, n)];
        const Matrix& g_min = g[index(std::min(t, s), nd, n)];
        const Matrix& g_1 = g[n];
        const Matrix& u_t = u[index(t, nd + 1.0, n)];
        const Matrix& u_s = u[index(s, nd + 1.0, n)];
        Matrix out = g_min - t * g_s - u_t * g_s - s * g_t + s * t * g_1 + s * u_t * g_1;
        out.noalias() -= g_t * u_s.transpose();
        out.noalias() += t * g_1 * u_s.transpose();
        out.noalias() += u_t * g_1 * u_s.transpose();
        return out;
    });
}

Vector midpoint_grid(std::size_t m) {
    if (m == 0) throw Error(ErrorKind::InvalidConfig, "grid must have at least one point");
    Vector grid(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        grid(static_cast<Eigen::Index>(i)) = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    }
    return grid;
}

Vector KLBasis::phi(std::size_t l, std::size_t m) const {
    const auto dd = static_cast<Eigen::Index>(d);
    return eigenfunctions.col(static_cast<Eigen::Index>(l)).segment(static_cast<Eigen::Index>(m) * dd, dd);
}

KLBasis kl_decompose(const CovarianceKernel& kernel, const Vector& grid, std::size_t truncation) {
    const auto m = grid.size();
    const auto d = static_cast<Eigen::Index>(kernel.d());
    const Eigen::Index size = m * d;
    if (truncation == 0 || static_cast<Eigen::Index>(truncation) > size) {
        throw Error(ErrorKind::InvalidConfig, "truncation must lie in [1, M d]");
    }
    const double dt = 1.0 / static_cast<double>(m);
    Matrix gram(size, size);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            const Matrix block = kernel(grid(a), grid(b)) * dt;
            gram.block(a * d, b * d, d, d) = block;
            gram.block(b * d, a * d, d, d) = block.transpose();
        }
    }
    gram = linalg::symmetrize(gram);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NotPSD, "eigendecomposition failed");
    const double trace = gram.trace();
    const double smallest = es.eigenvalues()(0);
    if (smallest < -1e-6 * std::abs(trace)) {
        throw Error(ErrorKind::NotPSD, "kernel Gram matrix has eigenvalue " + std::to_string(smallest));
    }
    KLBasis basis;
    basis.grid = grid;
    basis.d = kernel.d();
    const auto l = static_cast<Eigen::Index>(truncation);
    basis.eigenvalues.resize(l);
    basis.eigenfunctions.resize(size, l);
    const double inv_root_dt = 1.0 / std::sqrt(dt);
    for (Eigen::Index i = 0; i < l; ++i) {
        const Eigen::Index src = size - 1 - i;  // ascending order from the solver
        basis.eigenvalues(i) = std::max(0.0, es.eigenvalues()(src));
        basis.eigenfunctions.col(i) = es.eigenvectors().col(src) * inv_root_dt;
    }
    return basis;
}

std::vector<double> simulate_weighted_limit_sample(const KLBasis& basis, const WeightSpec& weight, Norm norm,
                                                   std::size_t reps, std::uint64_t seed) {
    weight.validate();
    const auto l = static_cast<Eigen::Index>(basis.truncation());
    const auto d = static_cast<Eigen::Index>(basis.d);
    const auto m = basis.grid.size();
    const Matrix loadings = basis.eigenfunctions * basis.eigenvalues.cwiseSqrt().asDiagonal();
    Vector inv_weight(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double t = basis.grid(i);
        const double w = weight.standardized() ? std::sqrt(t * (1.0 - t)) : weight(t);
        inv_weight(i) = 1.0 / w;
    }

    // Standard deviation of the simulated process's increment over one grid step,
    // projected on each coordinate direction later; rows i and i + 1 of `loadings`.
    std::vector<Matrix> step_cov(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        Matrix acc = Matrix::Zero(d, d);
        int sides = 0;
        for (Eigen::Index j : {i - 1, i + 1}) {
            if (j < 0 || j >= m) continue;
            const Matrix diff = loadings.middleRows(j * d, d) - loadings.middleRows(i * d, d);
            acc += diff * diff.transpose();
            ++sides;
        }
        step_cov[static_cast<std::size_t>(i)] = sides > 0 ? Matrix(acc / sides) : acc;
    }

    constexpr std::size_t kBatch = 256;
    std::vector<double> out(reps);
    Matrix normals(l, static_cast<Eigen::Index>(kBatch));
    Matrix paths;
    for (std::size_t start = 0; start < reps; start += kBatch) {
        const std::size_t count = std::min(kBatch, reps - start);
        const auto cols = static_cast<Eigen::Index>(count);
        for (Eigen::Index c = 0; c < cols; ++c) {
            Rng rng(stream_seed(seed, start + static_cast<std::size_t>(c)));
            for (Eigen::Index i = 0; i < l; ++i) normals(i, c) = rng.normal();
        }
        paths.noalias() = loadings * normals.leftCols(cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
            double best = 0.0;
            Eigen::Index arg = 0;
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto block = paths.col(c).segment(i * d, d);
                const double value = (norm == Norm::Euclidean ? block.norm() : block.cwiseAbs().maxCoeff()) * inv_weight(i);
                if (value > best) best = value, arg = i;
            }
            const Vector at = paths.col(c).segment(arg * d, d);
            Vector dir = Vector::Zero(d);
            if (norm == Norm::Euclidean) {
                if (at.norm() > 0.0) dir = at / at.norm();
            } else {
                Eigen::Index j = 0;
                at.cwiseAbs().maxCoeff(&j);
                dir(j) = 1.0;
            }
            const double step_sd = std::sqrt(std::max(0.0, dir.dot(step_cov[static_cast<std::size_t>(arg)] * dir)));
            out[start + static_cast<std::size_t>(c)] = best + kContinuityShift * step_sd * inv_weight(arg);
        }
    }
    return out;
}

double simulate_weighted_limit_quantile(const KLBasis& basis, const WeightSpec& weight, Norm norm, double alpha,
                                        std::size_t reps, std::uint64_t seed) {
    if (reps < 1000) throw Error(ErrorKind::InvalidConfig, "weighted-limit quantiles need reps >= 1000");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::DomainError, "alpha must lie in (0, 1)");
    return empirical_quantile(simulate_weighted_limit_sample(basis, weight, norm, reps, seed), 1.0 - alpha);
}

std::vector<double> simulate_ou_sup_sample(double horizon, int r, std::size_t reps, std::uint64_t seed, double dt,
                                           OuSampling sampling) {
    if (!(dt > 0.0 && dt <= 0.01)) throw Error(ErrorKind::InvalidConfig, "OU step must lie in (0, 0.01]");
    if (!(horizon > 0.0)) throw Error(ErrorKind::DomainError, "horizon must be positive");
    if (r < 1) throw Error(ErrorKind::DomainError, "r must be at least 1");
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const double step = horizon / static_cast<double>(steps);
    const double rho = std::exp(-0.5 * step);
    const double innov = std::sqrt(-std::expm1(-step));  // sqrt(1 - rho^2)
    std::vector<double> out(reps);
    std::vector<double> u(static_cast<std::size_t>(r));
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(stream_seed(seed, rep));
        double sq = 0.0;
        for (auto& ui : u) {
            ui = rng.normal();
            sq += ui * ui;
        }
        double prev = std::sqrt(sq);
        double best = prev;
        for (std::size_t s = 0; s < steps; ++s) {
            sq = 0.0;
            for (auto& ui : u) {
                ui = rho * ui + innov * rng.normal();
                sq += ui * ui;
            }
            const double cur = std::sqrt(sq);
            if (sampling == OuSampling::Grid) {
                best = std::max(best, cur);
                prev = cur;
                continue;
            }
            // Maximum of a unit-diffusion bridge from prev to cur over one step:
            // P(M > m) = exp(-2 (m - prev)(m - cur) / step).
            const double gap = cur - prev;
            const double m = 0.5 * (prev + cur + std::sqrt(gap * gap - 2.0 * step * std::log1p(-rng.uniform())));
            best = std::max(best, m);
            prev = cur;
        }
        out[rep] = best;
    }
    return out;
}

TailEstimate simulate_ou_sup_tail(double x, double horizon, int r, std::size_t reps, std::uint64_t seed, double dt,
                                  OuSampling sampling) {
    if (reps == 0) throw Error(ErrorKind::InvalidConfig, "reps must be positive");
    const auto sample = simulate_ou_sup_sample(horizon, r, reps, seed, dt, sampling);
    const auto hits = std::count_if(sample.begin(), sample.end(), [x](double v) { return v > x; });
    TailEstimate est;
    est.reps = reps;
    est.probability = static_cast<double>(hits) / static_cast<double>(reps);
    est.standard_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(reps));
    return est;
}

std::vector<double> simulate_trimmed_bridge_sup(std::size_t n, std::size_t d, double c1, double c2,
                                                std::size_t reps, std::uint64_t seed) {
    if (!(c1 > 0.0 && c1 < 0.5 && c2 > 0.0 && c2 < 0.5)) {
        throw Error(ErrorKind::InvalidConfig, "trimming fractions must lie in (0, 1/2)");
    }
    if (n < 2 || d < 1) throw Error(ErrorKind::InvalidConfig, "need n >= 2 and d >= 1");
    const double nd = static_cast<double>(n);
    const double step_sd = std::sqrt(1.0 / nd);
    // Index range of the trimmed interval, with a small tolerance so that c = j/n is included.
    const auto first = static_cast<std::size_t>(std::ceil(c1 * nd - 1e-9));
    const auto last = static_cast<std::size_t>(std::floor((1.0 - c2) * nd + 1e-9));
    if (first > last) throw Error(ErrorKind::InvalidConfig, "trimmed interval contains no grid point");

    std::vector<double> out(reps);
    Matrix w(static_cast<Eigen::Index>(n) + 1, static_cast<Eigen::Index>(d));
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(stream_seed(seed, rep));
        w.row(0).setZero();
        for (Eigen::Index j = 1; j <= static_cast<Eigen::Index>(n); ++j) {
            for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
                w(j, i) = w(j - 1, i) + step_sd * rng.normal();
            }
        }
        const Eigen::RowVectorXd end = w.row(static_cast<Eigen::Index>(n));
        double best = 0.0;
        for (std::size_t j = first; j <= last; ++j) {
            const double t = static_cast<double>(j) / nd;
            const double sq = (w.row(static_cast<Eigen::Index>(j)) - t * end).squaredNorm();
            best = std::max(best, sq / (t * (1.0 - t)));
        }
        out[rep] = std::sqrt(best);
    }
    return out;
}

std::vector<double> simulate_psi_sup(const Vector& h_path, std::size_t d, double alpha1, double alpha2,
                                     std::size_t reps, std::uint64_t seed) {
    const auto n = h_path.size() - 1;
    if (n < 2) throw Error(ErrorKind::InvalidConfig, "time-change path too short");
    if (!(alpha1 >= 0.0 && alpha1 < 0.5 && alpha2 >= 0.0 && alpha2 < 0.5)) {
        throw Error(ErrorKind::InvalidConfig, "weight exponents must lie in [0, 1/2)");
    }
    const auto dd = static_cast<Eigen::Index>(d);
    std::vector<double> out(reps);
    Matrix w(n + 1, dd);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(stream_seed(seed, rep));
        w.row(0).setZero();
        for (Eigen::Index j = 1; j <= n; ++j) {
            const double sd = std::sqrt(std::max(0.0, h_path(j) - h_path(j - 1)));
            for (Eigen::Index i = 0; i < dd; ++i) w(j, i) = w(j - 1, i) + sd * rng.normal();
        }
        const Eigen::RowVectorXd end = w.row(n);
        double best = 0.0;
        for (Eigen::Index j = 1; j < n; ++j) {
            const double u = static_cast<double>(j) / static_cast<double>(n);
            const double scale = std::pow(u, 2.0 * alpha1) * std::pow(1.0 - u, 2.0 * alpha2);
            best = std::max(best, (w.row(j) - u * end).squaredNorm() / scale);
        }
        out[rep] = best;
    }
    return out;
}

double psi_statistic(const CusumPath& path, const Matrix& xtx_over_n, double alpha1, double alpha2) {
    const std::size_t n = path.n();
    const auto ldlt = xtx_over_n.ldlt();
    double best = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(n);
        const Vector z = path.row(k).transpose();
        const double q = z.dot(ldlt.solve(z));
        best = std::max(best, q / (std::pow(u, 2.0 * alpha1) * std::pow(1.0 - u, 2.0 * alpha2)));
    }
    return best;
}

double empirical_quantile(std::vector<double> sample, double prob) {
    if (sample.empty()) throw Error(ErrorKind::InvalidConfig, "empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorKind::DomainError, "probability must lie in [0, 1]");
    std::sort(sample.begin(), sample.end());
    const double pos = prob * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

}  // namespace hetseg
