#include "hetseg/linalg.hpp"

#include <cmath>

#include "hetseg/error.hpp"

namespace hetseg::linalg {

double reciprocal_condition(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double hi = ev.maxCoeff();
    const double lo = ev.minCoeff();
    if (!(hi > 0.0) || !(lo > 0.0)) return 0.0;
    return lo / hi;
}

bool indefinite(const Matrix& symmetric) {
    const double trace = symmetric.trace();
    if (!(trace > 0.0) || !std::isfinite(trace)) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(symmetric), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() < -kRidgeTrigger * trace;
}

Matrix ridge_regularize(const Matrix& symmetric) {
    const double trace = symmetric.trace();
    if (!(trace > 0.0) || !std::isfinite(trace)) {
        throw Error(ErrorKind::SingularStandardizer, "standardizer has non-positive trace");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() >= kRidgeTrigger * trace) return symmetric;
    const auto d = static_cast<double>(symmetric.rows());
    Matrix out = symmetric;
    out.diagonal().array() += kRidgeLambda * trace / d;
    return out;
}

Matrix inverse_sqrt(const Matrix& symmetric) {
    const Matrix s = ridge_regularize(symmetrize(symmetric));
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::SingularStandardizer, "eigendecomposition failed");
    }
    const double floor = kEigenFloor * s.trace();
    Vector scale = es.eigenvalues().unaryExpr([floor](double v) { return 1.0 / std::sqrt(std::max(v, floor)); });
    return es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace hetseg::linalg
