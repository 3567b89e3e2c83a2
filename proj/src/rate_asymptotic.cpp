#include "lsasim/rate_asymptotic.hpp"

#include <cmath>

#include "lsasim/numerics.hpp"

namespace lsasim {

namespace {

// Tr(X Y) without forming the product.
Complex productTrace(const CMat& x, const CMat& y) {
  return x.transpose().cwiseProduct(y).sum();
}

double realTrace(const Complex& value) {
  const double tol = 1e-8 * std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > tol) {
    throw NumericalError("xiCoefficient: coupling has a non-negligible imaginary part");
  }
  return value.real();
}

Eigen::LLT<CMat> factorOrThrow(const CMat& a, const char* what) {
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError(what);
  return llt;
}

}  // namespace

double xiCoefficient(const CMat& gram, const CMat& cov_i, const CMat& cov_l,
                     const CMat& sigma) {
  const auto gram_llt = factorOrThrow(gram, "xiCoefficient: pilot gram is not positive definite");
  const auto sigma_llt =
      factorOrThrow(sigma, "xiCoefficient: interference covariance is not positive definite");
  const CMat weighted_i = gram_llt.solve(cov_i);
  const CMat weighted_l = sigma_llt.solve(cov_l);
  return realTrace(productTrace(weighted_i, weighted_l));
}

XiTable buildXiTable(const LinkStatistics& stats) {
  XiTable table;
  table.cells = stats.cells;
  table.users = stats.users;
  table.xi.assign(static_cast<std::size_t>(stats.users), RMat::Zero(stats.cells, stats.cells));

  const auto sigma_llt =
      factorOrThrow(stats.sigma, "buildXiTable: interference covariance is not positive definite");
  for (int k = 0; k < stats.users; ++k) {
    const auto gram_llt =
        factorOrThrow(stats.gram[static_cast<std::size_t>(k)],
                      "buildXiTable: pilot gram is not positive definite");
    std::vector<CMat> gram_weighted, sigma_weighted;
    gram_weighted.reserve(static_cast<std::size_t>(stats.cells));
    sigma_weighted.reserve(static_cast<std::size_t>(stats.cells));
    for (int l = 0; l < stats.cells; ++l) {
      const CMat& a = stats.fading_cov[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
      gram_weighted.emplace_back(gram_llt.solve(a));
      sigma_weighted.emplace_back(sigma_llt.solve(a));
    }
    for (int i = 0; i < stats.cells; ++i) {
      for (int l = 0; l < stats.cells; ++l) {
        table.xi[static_cast<std::size_t>(k)](i, l) =
            realTrace(productTrace(gram_weighted[static_cast<std::size_t>(i)],
                                   sigma_weighted[static_cast<std::size_t>(l)]));
      }
    }
  }
  return table;
}

AsymptoticRate asymptoticSumRate(const XiTable& table) {
  AsymptoticRate result;
  result.per_user_sinr = RVec::Zero(table.users);
  for (int k = 0; k < table.users; ++k) {
    const RMat& xi = table.xi[static_cast<std::size_t>(k)];
    double sinr = 0.0;
    if (table.cells == 1) {
      sinr = xi(0, 0);
    } else {
      const int interferers = table.cells - 1;
      const RMat coupling = xi.block(1, 1, interferers, interferers) +
                            RMat::Identity(interferers, interferers);
      Eigen::FullPivLU<RMat> lu(coupling);
      if (!lu.isInvertible()) {
        throw NumericalError("asymptoticSumRate: interference coupling system is singular");
      }
      const RVec solved = lu.solve(xi.block(1, 0, interferers, 1));
      sinr = xi(0, 0) - xi.block(0, 1, 1, interferers).row(0).dot(solved);
    }
    const double tol = 1e-9 * (1.0 + std::abs(xi(0, 0)));
    if (sinr < -tol) {
      throw NumericalError("asymptoticSumRate: negative deterministic-equivalent SINR");
    }
    sinr = std::max(sinr, 0.0);
    result.per_user_sinr(k) = sinr;
    result.sum_rate += std::log2(1.0 + sinr);
  }
  return result;
}

double collocatedAsymptoticSumRate(const LargeScaleMap& gains, double antennas,
                                   double pilot_noise, double uplink_noise) {
  if (gains.rrus != 1) {
    throw ConfigError("collocatedAsymptoticSumRate requires one RRU per cell (N = 1)");
  }
  if (!(antennas > 0.0)) throw ConfigError("collocatedAsymptoticSumRate: antennas must be > 0");

  // Per-user pilot normalization and the average estimation-error power.
  RVec q = RVec::Constant(gains.users, pilot_noise);
  double error_power = 0.0;
  for (int k = 0; k < gains.users; ++k) {
    double sum_gain = 0.0, sum_gain_sq = 0.0;
    for (int l = 0; l < gains.cells; ++l) {
      const double lambda = gains(l, 0, k);
      sum_gain += lambda;
      sum_gain_sq += lambda * lambda;
    }
    q(k) += sum_gain;
    error_power += sum_gain - sum_gain_sq / q(k);
  }
  const double noise_power = error_power + uplink_noise;

  double rate = 0.0;
  for (int k = 0; k < gains.users; ++k) {
    double contamination = 0.0;
    for (int l = 1; l < gains.cells; ++l) {
      contamination += gains(l, 0, k) * gains(l, 0, k);
    }
    const double denom = q(k) * noise_power / antennas + contamination;
    if (!(denom > 0.0)) {
      throw NumericalError(
          "collocatedAsymptoticSumRate: zero contamination at unbounded antenna count");
    }
    const double own = gains(0, 0, k);
    rate += std::log2(1.0 + own * own / denom);
  }
  return rate;
}

double collocatedAsymptoticSumRate(const CorrelationSet& corr, const LargeScaleMap& gains,
                                   double antennas, double pilot_noise, double uplink_noise) {
  if (!corr.isIdentity()) {
    throw ConfigError("collocatedAsymptoticSumRate requires uncorrelated antennas (R = I)");
  }
  return collocatedAsymptoticSumRate(gains, antennas, pilot_noise, uplink_noise);
}

double contaminationLimit(const LargeScaleMap& gains) {
  if (gains.rrus != 1) {
    throw ConfigError("contaminationLimit requires one RRU per cell (N = 1)");
  }
  double rate = 0.0;
  for (int k = 0; k < gains.users; ++k) {
    double contamination = 0.0;
    for (int l = 1; l < gains.cells; ++l) {
      contamination += gains(l, 0, k) * gains(l, 0, k);
    }
    if (!(contamination > 0.0)) {
      throw NumericalError("contaminationLimit: a user has zero pilot contamination; "
                           "the infinite-antenna limit is unbounded");
    }
    const double own = gains(0, 0, k);
    rate += std::log2(1.0 + own * own / contamination);
  }
  return rate;
}

}  // namespace lsasim
