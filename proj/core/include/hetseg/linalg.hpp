#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hetseg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Matrix-valued function sampled on the integer grid k = 0..N.
using MatrixPath = std::vector<Matrix>;

namespace linalg {

inline constexpr double kRidgeTrigger = 1e-12;  ///< relative to trace
inline constexpr double kRidgeLambda = 1e-10;   ///< ridge = lambda * trace / d
inline constexpr double kEigenFloor = 1e-12;    ///< relative to trace

/// lambda_min / lambda_max of a symmetric matrix; 0 when not positive definite.
[[nodiscard]] double reciprocal_condition(const Matrix& symmetric);

/// True when trace <= 0 or the smallest eigenvalue is below -kRidgeTrigger*trace,
/// i.e. the matrix is indefinite beyond rounding.
[[nodiscard]] bool indefinite(const Matrix& symmetric);

/// Adds lambda*trace/d to the diagonal when the smallest eigenvalue falls
/// below kRidgeTrigger*trace. Throws SingularStandardizer if trace <= 0.
[[nodiscard]] Matrix ridge_regularize(const Matrix& symmetric);

/// Symmetric inverse square root via eigendecomposition, eigenvalues floored
/// at kEigenFloor*trace. Applies ridge_regularize first.
[[nodiscard]] Matrix inverse_sqrt(const Matrix& symmetric);

[[nodiscard]] inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace linalg
}  // namespace hetseg
