#include "lsasim/reciprocity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "lsasim/channel.hpp"
#include "lsasim/numerics.hpp"

namespace lsasim {

namespace {

constexpr std::uint64_t kMismatchStream = 0x6d69732d7472ULL;

std::atomic<std::uint64_t> g_loss_clamps{0};

CVec sampleGainVector(int count, double delta2, double theta, Rng& rng) {
  CVec v(count);
  const double amp_std = std::sqrt(delta2);
  for (int i = 0; i < count; ++i) {
    double amplitude = 1.0;
    if (delta2 > 0.0) amplitude = std::exp(amp_std * rng.gaussian());
    Complex phase(1.0, 0.0);
    if (theta > 0.0) {
      const double phi = rng.uniform(-theta, theta);
      phase = Complex(std::cos(phi), std::sin(phi));
    }
    v(i) = amplitude * phase;
  }
  return v;
}

// Unnormalized ZF: conj(G) (G^T conj(G))^{-1}.
CMat zfDirection(const CMat& uplink) {
  const Eigen::Index users = uplink.cols();
  const CMat gram = uplink.transpose() * uplink.conjugate();
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("zfPrecoder: uplink Gram matrix is singular");
  }
  const CMat gram_inv = llt.solve(CMat::Identity(users, users));
  return uplink.conjugate() * gram_inv;
}

CMat normalizeTotalPower(CMat w) {
  const double norm = w.norm();
  if (!(norm > 0.0)) throw NumericalError("zfPrecoder: precoder has zero power");
  return w / norm;
}

}  // namespace

double MismatchConfig::dbSpreadToVariance(double db) {
  const double scale = db * std::numbers::ln10 / 20.0;
  return scale * scale;
}

void MismatchConfig::validate() const {
  auto requireTheta = [](double value, const char* key) {
    if (!(value >= 0.0 && value <= std::numbers::pi)) {
      throw ConfigError(std::string(key) + " must lie in [0, pi] radians");
    }
  };
  requireTheta(theta_bs_t, "theta_bs_t");
  requireTheta(theta_bs_r, "theta_bs_r");
  requireTheta(theta_ue_t, "theta_ue_t");
  requireTheta(theta_ue_r, "theta_ue_r");
  auto requireVariance = [](double value, const char* key) {
    if (!(value >= 0.0)) throw ConfigError(std::string(key) + " must be >= 0");
  };
  requireVariance(delta2_bs_t, "delta2_bs_t");
  requireVariance(delta2_bs_r, "delta2_bs_r");
  requireVariance(delta2_ue_t, "delta2_ue_t");
  requireVariance(delta2_ue_r, "delta2_ue_r");
}

RfGains sampleRfGains(int antennas, int users, const MismatchConfig& config, Rng& rng) {
  if (antennas < 1 || users < 1) {
    throw std::invalid_argument("sampleRfGains: antennas and users must be >= 1");
  }
  RfGains gains;
  gains.bs_t = sampleGainVector(antennas, config.delta2_bs_t, config.theta_bs_t, rng);
  gains.bs_r = sampleGainVector(antennas, config.delta2_bs_r, config.theta_bs_r, rng);
  gains.ue_t = sampleGainVector(users, config.delta2_ue_t, config.theta_ue_t, rng);
  gains.ue_r = sampleGainVector(users, config.delta2_ue_r, config.theta_ue_r, rng);
  return gains;
}

EffectiveChannels effectiveChannels(const CMat& propagation, const RfGains& gains) {
  const Eigen::Index users = propagation.rows();
  const Eigen::Index antennas = propagation.cols();
  if (gains.bs_t.size() != antennas || gains.bs_r.size() != antennas ||
      gains.ue_t.size() != users || gains.ue_r.size() != users) {
    throw std::invalid_argument("effectiveChannels: gain vector lengths do not match H");
  }
  EffectiveChannels eff;
  eff.uplink = gains.bs_r.asDiagonal() * propagation.transpose() * gains.ue_t.asDiagonal();
  eff.downlink = gains.ue_r.asDiagonal() * propagation * gains.bs_t.asDiagonal();
  return eff;
}

CMat zfPrecoder(const CMat& uplink) { return normalizeTotalPower(zfDirection(uplink)); }

CMat calibratedZfPrecoder(const CMat& uplink, const CVec& bs_t, const CVec& bs_r) {
  if (bs_t.size() != uplink.rows() || bs_r.size() != uplink.rows()) {
    throw std::invalid_argument("calibratedZfPrecoder: calibration vector lengths do not match");
  }
  const CVec calibration = bs_r.cwiseQuotient(bs_t);
  return normalizeTotalPower(calibration.asDiagonal() * zfDirection(uplink));
}

double downlinkSumRate(const CMat& downlink, const CMat& precoder, double snr) {
  if (downlink.cols() != precoder.rows() || downlink.rows() != precoder.cols()) {
    throw std::invalid_argument("downlinkSumRate: downlink and precoder shapes do not match");
  }
  if (!(snr >= 0.0)) throw std::invalid_argument("downlinkSumRate: snr must be >= 0");
  const CMat coupling = downlink * precoder;
  double rate = 0.0;
  for (Eigen::Index k = 0; k < coupling.rows(); ++k) {
    const double signal = std::norm(coupling(k, k));
    const double interference = std::max(coupling.row(k).squaredNorm() - signal, 0.0);
    rate += std::log2(1.0 + snr * signal / (snr * interference + 1.0));
  }
  return rate;
}

MismatchBound mismatchBound(int antennas, int users, double snr,
                            const MismatchConfig& config) {
  config.validate();
  if (users < 2) throw ConfigError("mismatchBound requires at least two users (K >= 2)");
  if (antennas <= users) throw ConfigError("mismatchBound requires antennas > users (M > K)");
  if (!(snr > 0.0)) throw ConfigError("mismatchBound requires a positive snr");

  const double m = antennas;
  const double k = users;
  MismatchBound bound;
  bound.baseline = k * (std::log2(snr) + std::log2((m - k) / k));
  bound.ue_offset = k * std::numbers::log2e * 2.0 * config.delta2_ue_t;

  const double sinc_r = sinc(config.theta_bs_r);
  const double sinc_t = sinc(config.theta_bs_t);
  const double lambda1 = sinc_r * sinc_r * sinc_t * sinc_t;
  const double lambda2 = std::exp(2.0 * config.delta2_bs_t) + std::exp(2.0 * config.delta2_bs_r) -
                         2.0 * std::exp(config.delta2_bs_t / 2.0 + config.delta2_bs_r / 2.0) *
                             sinc_r * sinc_t;
  if (lambda2 <= 0.0) {
    // Perfect base-station chains: the BS offset formula divides by zero and
    // carries no information. Flag it instead of producing an infinity.
    bound.degenerate = true;
  } else {
    bound.bs_offset = k * (std::log2(snr) + std::log2(lambda1 / lambda2) +
                           std::log2(m * k / ((m - k) * (k - 1.0))));
  }
  return bound;
}

double normalizedLoss(double rate_perfect, double rate_mismatched) {
  if (!(rate_perfect > 0.0)) {
    throw NumericalError("normalizedLoss: perfect-system rate must be positive");
  }
  const double loss = 1.0 - rate_mismatched / rate_perfect;
  if (loss < 0.0 || loss > 1.0) {
    g_loss_clamps.fetch_add(1);
    return std::clamp(loss, 0.0, 1.0);
  }
  return loss;
}

std::uint64_t lossClampCount() { return g_loss_clamps.load(); }

void resetLossClampCount() { g_loss_clamps.store(0); }

MismatchErgodicResult ergodicZfMismatch(int antennas, int users, double snr,
                                        const MismatchConfig& config, int trials,
                                        const Rng& base) {
  config.validate();
  if (users < 1) throw ConfigError("ergodicZfMismatch requires at least one user");
  if (antennas < users) {
    throw ConfigError("ergodicZfMismatch requires antennas >= users for zero forcing");
  }
  if (trials < 1) throw std::invalid_argument("ergodicZfMismatch: trials must be >= 1");

  std::vector<double> mismatched(static_cast<std::size_t>(trials));
  std::vector<double> perfect(static_cast<std::size_t>(trials));
  parallelFor(trials, [&](int t) {
    Rng rng = base.derive(kMismatchStream, static_cast<std::uint64_t>(t));
    const CMat propagation = complexGaussianMatrix(rng, users, antennas);
    const RfGains gains = sampleRfGains(antennas, users, config, rng);
    const EffectiveChannels eff = effectiveChannels(propagation, gains);
    mismatched[static_cast<std::size_t>(t)] =
        downlinkSumRate(eff.downlink, zfPrecoder(eff.uplink), snr);
    // Perfect reciprocity: the same propagation with unit gains everywhere.
    perfect[static_cast<std::size_t>(t)] =
        downlinkSumRate(propagation, zfPrecoder(propagation.transpose()), snr);
  });

  auto reduce = [trials](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / trials;
    double ssd = 0.0;
    for (double x : v) ssd += (x - mean) * (x - mean);
    const double se =
        trials > 1 ? std::sqrt(ssd / (static_cast<double>(trials) * (trials - 1))) : 0.0;
    return ErgodicRate{mean, se, trials};
  };

  MismatchErgodicResult result;
  result.mismatched = reduce(mismatched);
  result.perfect = reduce(perfect);
  result.loss = normalizedLoss(result.perfect.mean, result.mismatched.mean);

  if (trials > 1) {
    double cov = 0.0;
    for (int t = 0; t < trials; ++t) {
      cov += (mismatched[static_cast<std::size_t>(t)] - result.mismatched.mean) *
             (perfect[static_cast<std::size_t>(t)] - result.perfect.mean);
    }
    cov /= (static_cast<double>(trials) - 1.0) * trials;  // covariance of the two means
    const double mm = result.mismatched.mean;
    const double mp = result.perfect.mean;
    const double var_mm = result.mismatched.std_error * result.mismatched.std_error;
    const double var_mp = result.perfect.std_error * result.perfect.std_error;
    // Delta method for 1 - mm/mp.
    const double var_loss = var_mm / (mp * mp) + mm * mm * var_mp / (mp * mp * mp * mp) -
                            2.0 * mm * cov / (mp * mp * mp);
    result.loss_std_error = std::sqrt(std::max(var_loss, 0.0));
  }
  return result;
}

}  // namespace lsasim
