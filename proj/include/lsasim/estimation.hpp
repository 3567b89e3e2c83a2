#pragma once

#include <vector>

#include "lsasim/channel.hpp"
#include "lsasim/scenario.hpp"
#include "lsasim/types.hpp"

namespace lsasim {

// Block-diagonal covariance R * Lambda of the channel between user
// (cell, user) and the reference cell's RRUs.
CMat fadingCovariance(const CorrelationSet& corr, const LargeScaleMap& gains, int cell, int user);

// Pilot observation for one user index. The same pilot is reused in every
// cell, so the channels of all co-pilot users superpose, plus CN(0, gamma_p I)
// noise.
CVec observePilot(const std::vector<CVec>& copilot_channels, double pilot_noise, Rng& rng);

// Pilot-observation covariance Q = sum_cells R Lambda + pilot_noise * I.
CMat pilotGram(const std::vector<CMat>& fading_cov, double pilot_noise);

// MMSE estimates of every co-pilot user's channel from a single observation:
// estimate for cell l is (R Lambda)_l Q^{-1} y.
std::vector<CVec> mmseEstimate(const std::vector<CMat>& fading_cov, const CMat& gram,
                               const CVec& observation);

// Estimation-error covariance A - A Q^{-1} A for A = R Lambda.
CMat errorCovariance(const CMat& fading_cov, const CMat& gram);

// Statistically equivalent estimate draws: estimate_l = A_l Q^{-1/2} w with a
// single shared w ~ CN(0, I) across cells — co-pilot estimates are fully
// correlated because they come from one observation.
std::vector<CVec> equivalentChannelSamples(const std::vector<CMat>& fading_cov,
                                           const CMat& gram_inv_sqrt, Rng& rng);

// Total estimation-error-plus-noise covariance: error covariances summed over
// every cell and user, plus uplink noise on the diagonal.
CMat interferenceNoiseCov(const std::vector<std::vector<CMat>>& fading_cov,
                          const std::vector<CMat>& gram, double uplink_noise);

// Second-order state for one large-scale realization: everything the Monte
// Carlo and deterministic-equivalent rate paths consume.
struct LinkStatistics {
  int cells = 0, rrus = 0, antennas = 0, users = 0;
  double pilot_noise = 0.0, uplink_noise = 0.0;
  std::vector<std::vector<CMat>> fading_cov;       // [cell][user] = R Lambda
  std::vector<CMat> gram;                          // [user] = Q
  std::vector<CMat> gram_inv_sqrt;                 // [user] = Q^{-1/2}
  std::vector<std::vector<CMat>> estimate_factor;  // [cell][user] = R Lambda Q^{-1/2}
  CMat sigma;                                      // interference-plus-noise covariance

  int dimension() const { return rrus * antennas; }
};

LinkStatistics buildLinkStatistics(const CorrelationSet& corr, const LargeScaleMap& gains,
                                   double pilot_noise, double uplink_noise);

// One draw of estimated channel matrices: element [cell] is dimension() x
// users; each user column shares its white driving vector across cells. Draws
// one vector per user, users in index order.
std::vector<CMat> sampleEstimatedChannels(const LinkStatistics& stats, Rng& rng);

}  // namespace lsasim
