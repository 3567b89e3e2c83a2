#pragma once

#include <cmath>
#include <cstdint>

#include "lsasim/types.hpp"

namespace lsasim {

// sin(x)/x with the removable singularity filled in: sinc(0) = 1.
double sinc(double x);

// How many times log2DetHermitian had to repair a not-quite-PD input since
// process start (or the last reset). Long simulations report this so that a
// result relying on repaired factorizations is visible.
std::uint64_t psdRepairCount();
void resetPsdRepairCount();

// log2 det(A) for a Hermitian positive definite matrix, via Cholesky. If the
// factorization fails (the matrix is only PSD up to rounding), falls back to
// an eigendecomposition with the spectrum clamped at a small floor and counts
// the repair. Throws NumericalError for genuinely indefinite input.
double log2DetHermitian(const CMat& a);

// Hermitian PSD square root by eigendecomposition. Eigenvalues below `floor`
// are treated as exact zeros (near-singular correlation matrices stay PSD);
// eigenvalues negative beyond rounding throw NumericalError.
template <typename Derived>
typename Derived::PlainObject hermitianSqrt(const Eigen::MatrixBase<Derived>& a,
                                            double floor = 1e-12) {
  using Mat = typename Derived::PlainObject;
  if (a.rows() != a.cols()) throw NumericalError("hermitianSqrt: matrix must be square");
  if (a.rows() == 0) return Mat();
  Eigen::SelfAdjointEigenSolver<Mat> es(a.derived());
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitianSqrt: eigendecomposition did not converge");
  }
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-9 * scale) {
    throw NumericalError("hermitianSqrt: matrix is not positive semidefinite");
  }
  const RVec roots =
      ev.unaryExpr([floor](double v) { return v < floor ? 0.0 : std::sqrt(v); });
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

// Inverse square root of a Hermitian positive definite matrix. Throws
// NumericalError when the smallest eigenvalue is not strictly positive.
template <typename Derived>
typename Derived::PlainObject hermitianInvSqrt(const Eigen::MatrixBase<Derived>& a) {
  using Mat = typename Derived::PlainObject;
  if (a.rows() != a.cols()) throw NumericalError("hermitianInvSqrt: matrix must be square");
  if (a.rows() == 0) return Mat();
  Eigen::SelfAdjointEigenSolver<Mat> es(a.derived());
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitianInvSqrt: eigendecomposition did not converge");
  }
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    throw NumericalError("hermitianInvSqrt: matrix is not positive definite");
  }
  const RVec roots = ev.unaryExpr([](double v) { return 1.0 / std::sqrt(v); });
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace lsasim
