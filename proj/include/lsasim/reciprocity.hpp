#pragma once

#include "lsasim/rate_mc.hpp"
#include "lsasim/types.hpp"

namespace lsasim {

// Random RF-chain mismatch model. Each chain's gain is e^x * e^{j*phi} with
// x ~ N(0, delta2) (log-amplitude, natural units) and phi uniform on
// [-theta, +theta] radians, so a gain's mean is e^{delta2/2} * sinc(theta).
struct MismatchConfig {
  double theta_bs_t = 0.0, theta_bs_r = 0.0;  // base-station phase spreads
  double theta_ue_t = 0.0, theta_ue_r = 0.0;  // user-side phase spreads
  double delta2_bs_t = 0.0, delta2_bs_r = 0.0;  // log-amplitude variances
  double delta2_ue_t = 0.0, delta2_ue_r = 0.0;

  // Natural-units variance of a log-normal amplitude whose spread is quoted
  // as `db` decibels: (db * ln(10)/20)^2.
  static double dbSpreadToVariance(double db);

  bool operator==(const MismatchConfig&) const = default;

  void validate() const;  // throws ConfigError naming the offending field
};

// One draw of the four per-chain gain vectors. A zero spread yields the exact
// value 1 + 0i and consumes no randomness for that factor.
struct RfGains {
  CVec bs_t, bs_r;  // length = base-station antennas
  CVec ue_t, ue_r;  // length = users
};

// Draw order: bs_t, bs_r, ue_t, ue_r; within a vector, entry by entry,
// amplitude before phase.
RfGains sampleRfGains(int antennas, int users, const MismatchConfig& config, Rng& rng);

// Effective channels seen through the RF chains for a propagation matrix H
// (users x antennas): uplink = diag(bs_r) H^T diag(ue_t) (antennas x users),
// downlink = diag(ue_r) H diag(bs_t) (users x antennas).
struct EffectiveChannels {
  CMat uplink;
  CMat downlink;
};

EffectiveChannels effectiveChannels(const CMat& propagation, const RfGains& gains);

// Zero-forcing precoder computed from the uplink channel estimate,
// conj(G) (G^T conj(G))^{-1}, normalized to unit total transmit power
// (Frobenius norm 1). Throws NumericalError on a singular Gram matrix.
CMat zfPrecoder(const CMat& uplink);

// Zero-forcing precoder with the base-station calibration correction
// diag(bs_r / bs_t) applied before normalization. With all-ones gains the
// arithmetic reduces to exactly zfPrecoder's.
CMat calibratedZfPrecoder(const CMat& uplink, const CVec& bs_t, const CVec& bs_r);

// Downlink sum-rate under a fixed precoder at total transmit SNR `snr`
// (linear): E = downlink * precoder, user k gets
// log2(1 + snr |E_kk|^2 / (snr * sum_{j != k} |E_kj|^2 + 1)).
double downlinkSumRate(const CMat& downlink, const CMat& precoder, double snr);

// Closed-form mismatch analysis: the perfect-reciprocity lower bound and the
// rate offsets caused by base-station and user-side mismatch. All terms in
// bits; `snr` linear.
struct MismatchBound {
  double baseline = 0.0;   // lower bound with perfect calibration
  double bs_offset = 0.0;  // rate offset from base-station mismatch
  double ue_offset = 0.0;  // rate offset from user-side transmit mismatch
  bool degenerate = false; // no BS mismatch at all: the BS offset formula is vacuous

  // Lower bound on the ergodic mismatched-system rate; the BS offset is
  // omitted in the degenerate (perfect BS chains) case.
  double lowerBound() const {
    return degenerate ? baseline - ue_offset : baseline - bs_offset - ue_offset;
  }
};

// Requires users >= 2 and antennas > users (the closed form divides by K - 1
// and M - K). Throws ConfigError otherwise.
MismatchBound mismatchBound(int antennas, int users, double snr, const MismatchConfig& config);

// 1 - mismatched/perfect, clamped to [0, 1]; values outside (possible through
// Monte Carlo noise) increment clamp-warning counters retrievable via
// lossClampCount. Throws NumericalError when the perfect-system rate is not
// positive.
double normalizedLoss(double rate_perfect, double rate_mismatched);
std::uint64_t lossClampCount();
void resetLossClampCount();

// Paired ergodic comparison: for each trial, one propagation draw is shared
// by the mismatched system (random gains, uncalibrated ZF) and the perfect
// system (all gains 1). Loss is computed from the two means; its standard
// error propagates the covariance of the paired samples.
struct MismatchErgodicResult {
  ErgodicRate mismatched;
  ErgodicRate perfect;
  double loss = 0.0;
  double loss_std_error = 0.0;
};

MismatchErgodicResult ergodicZfMismatch(int antennas, int users, double snr,
                                        const MismatchConfig& config, int trials,
                                        const Rng& base);

}  // namespace lsasim
