#include "lsasim/numerics.hpp"

#include <atomic>
#include <cmath>

namespace lsasim {

namespace {
std::atomic<std::uint64_t> g_psd_repairs{0};
constexpr double kEigenvalueFloor = 1e-12;
}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::uint64_t psdRepairCount() { return g_psd_repairs.load(); }

void resetPsdRepairCount() { g_psd_repairs.store(0); }

double log2DetHermitian(const CMat& a) {
  if (a.rows() != a.cols()) throw NumericalError("log2DetHermitian: matrix must be square");
  if (a.rows() == 0) return 0.0;

  Eigen::LLT<CMat> llt(a);
  if (llt.info() == Eigen::Success) {
    // det(A) = prod L_ii^2 with real positive Cholesky diagonal.
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      acc += std::log2(llt.matrixLLT()(i, i).real());
    }
    return 2.0 * acc;
  }

  // Cholesky refused: the matrix is at best PSD up to rounding. Repair by
  // clamping the spectrum at a tiny floor, and count the event.
  Eigen::SelfAdjointEigenSolver<CMat> es;
  es.compute(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("log2DetHermitian: eigendecomposition did not converge");
  }
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-9 * scale) {
    throw NumericalError("log2DetHermitian: matrix is indefinite");
  }
  g_psd_repairs.fetch_add(1);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    acc += std::log2(std::max(ev(i), kEigenvalueFloor));
  }
  return acc;
}

}  // namespace lsasim
