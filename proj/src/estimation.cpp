#include "lsasim/estimation.hpp"

#include <cmath>

#include "lsasim/numerics.hpp"

namespace lsasim {

CMat fadingCovariance(const CorrelationSet& corr, const LargeScaleMap& gains, int cell,
                      int user) {
  const int antennas = corr.antennas;
  const int dim = gains.rrus * antennas;
  CMat cov = CMat::Zero(dim, dim);
  for (int n = 0; n < gains.rrus; ++n) {
    cov.block(n * antennas, n * antennas, antennas, antennas) =
        gains(cell, n, user) * corr.blockFor(cell, n, user);
  }
  return cov;
}

CVec observePilot(const std::vector<CVec>& copilot_channels, double pilot_noise, Rng& rng) {
  if (copilot_channels.empty()) {
    throw std::invalid_argument("observePilot: need at least one channel");
  }
  CVec y = CVec::Zero(copilot_channels.front().size());
  for (const CVec& g : copilot_channels) {
    if (g.size() != y.size()) {
      throw std::invalid_argument("observePilot: channel dimensions disagree");
    }
    y += g;
  }
  const double noise_scale = std::sqrt(pilot_noise);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) += noise_scale * rng.complexGaussian();
  }
  return y;
}

CMat pilotGram(const std::vector<CMat>& fading_cov, double pilot_noise) {
  if (fading_cov.empty()) throw std::invalid_argument("pilotGram: need at least one covariance");
  const Eigen::Index dim = fading_cov.front().rows();
  CMat q = pilot_noise * CMat::Identity(dim, dim);
  for (const CMat& a : fading_cov) q += a;
  return q;
}

std::vector<CVec> mmseEstimate(const std::vector<CMat>& fading_cov, const CMat& gram,
                               const CVec& observation) {
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mmseEstimate: pilot gram matrix is not positive definite");
  }
  const CVec weighted = llt.solve(observation);
  std::vector<CVec> estimates;
  estimates.reserve(fading_cov.size());
  for (const CMat& a : fading_cov) estimates.emplace_back(a * weighted);
  return estimates;
}

CMat errorCovariance(const CMat& fading_cov, const CMat& gram) {
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("errorCovariance: pilot gram matrix is not positive definite");
  }
  return fading_cov - fading_cov * llt.solve(fading_cov);
}

std::vector<CVec> equivalentChannelSamples(const std::vector<CMat>& fading_cov,
                                           const CMat& gram_inv_sqrt, Rng& rng) {
  const CVec white = complexGaussianVector(rng, static_cast<int>(gram_inv_sqrt.rows()));
  const CVec shaped = gram_inv_sqrt * white;
  std::vector<CVec> estimates;
  estimates.reserve(fading_cov.size());
  for (const CMat& a : fading_cov) estimates.emplace_back(a * shaped);
  return estimates;
}

CMat interferenceNoiseCov(const std::vector<std::vector<CMat>>& fading_cov,
                          const std::vector<CMat>& gram, double uplink_noise) {
  if (fading_cov.empty() || fading_cov.front().empty()) {
    throw std::invalid_argument("interferenceNoiseCov: empty covariance table");
  }
  const Eigen::Index dim = fading_cov.front().front().rows();
  CMat sigma = uplink_noise * CMat::Identity(dim, dim);
  const std::size_t users = fading_cov.front().size();
  if (gram.size() != users) {
    throw std::invalid_argument("interferenceNoiseCov: one gram matrix per user required");
  }
  for (std::size_t k = 0; k < users; ++k) {
    Eigen::LLT<CMat> llt(gram[k]);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("interferenceNoiseCov: pilot gram matrix is not positive definite");
    }
    for (const auto& row : fading_cov) {
      const CMat& a = row.at(k);
      sigma += a - a * llt.solve(a);
    }
  }
  return sigma;
}

LinkStatistics buildLinkStatistics(const CorrelationSet& corr, const LargeScaleMap& gains,
                                   double pilot_noise, double uplink_noise) {
  if (!(pilot_noise > 0.0)) throw ConfigError("gamma_p must be > 0");
  if (!(uplink_noise > 0.0)) throw ConfigError("gamma_ul must be > 0");

  LinkStatistics stats;
  stats.cells = gains.cells;
  stats.rrus = gains.rrus;
  stats.antennas = corr.antennas;
  stats.users = gains.users;
  stats.pilot_noise = pilot_noise;
  stats.uplink_noise = uplink_noise;

  stats.fading_cov.assign(static_cast<std::size_t>(stats.cells), {});
  for (int l = 0; l < stats.cells; ++l) {
    stats.fading_cov[l].reserve(static_cast<std::size_t>(stats.users));
    for (int k = 0; k < stats.users; ++k) {
      stats.fading_cov[l].emplace_back(fadingCovariance(corr, gains, l, k));
    }
  }

  const int dim = stats.dimension();
  stats.gram.reserve(static_cast<std::size_t>(stats.users));
  stats.gram_inv_sqrt.reserve(static_cast<std::size_t>(stats.users));
  stats.estimate_factor.assign(static_cast<std::size_t>(stats.cells), {});
  CMat sigma = uplink_noise * CMat::Identity(dim, dim);
  for (int k = 0; k < stats.users; ++k) {
    CMat q = pilot_noise * CMat::Identity(dim, dim);
    for (int l = 0; l < stats.cells; ++l) q += stats.fading_cov[l][k];
    Eigen::LLT<CMat> llt(q);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("buildLinkStatistics: pilot gram matrix is not positive definite");
    }
    const CMat q_inv_sqrt = hermitianInvSqrt(q);
    for (int l = 0; l < stats.cells; ++l) {
      const CMat& a = stats.fading_cov[l][k];
      stats.estimate_factor[l].emplace_back(a * q_inv_sqrt);
      sigma += a - a * llt.solve(a);
    }
    stats.gram.emplace_back(std::move(q));
    stats.gram_inv_sqrt.emplace_back(q_inv_sqrt);
  }
  stats.sigma = std::move(sigma);
  return stats;
}

std::vector<CMat> sampleEstimatedChannels(const LinkStatistics& stats, Rng& rng) {
  const int dim = stats.dimension();
  std::vector<CMat> estimated(static_cast<std::size_t>(stats.cells), CMat(dim, stats.users));
  for (int k = 0; k < stats.users; ++k) {
    const CVec white = complexGaussianVector(rng, dim);
    for (int l = 0; l < stats.cells; ++l) {
      estimated[static_cast<std::size_t>(l)].col(k).noalias() =
          stats.estimate_factor[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] * white;
    }
  }
  return estimated;
}

}  // namespace lsasim
