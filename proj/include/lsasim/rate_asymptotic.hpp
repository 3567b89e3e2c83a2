#pragma once

#include <vector>

#include "lsasim/estimation.hpp"
#include "lsasim/types.hpp"

namespace lsasim {

// Deterministic-equivalent coupling between the estimates of cells i and l
// for one user: Tr(Q^{-1} A_i Sigma^{-1} A_l), with A = R Lambda. Real for
// the real-valued correlation models used here; an imaginary part beyond
// rounding throws NumericalError.
double xiCoefficient(const CMat& gram, const CMat& cov_i, const CMat& cov_l, const CMat& sigma);

// All couplings: one cells x cells matrix per user.
struct XiTable {
  int cells = 0, users = 0;
  std::vector<RMat> xi;  // [user](i, l)
};

XiTable buildXiTable(const LinkStatistics& stats);

struct AsymptoticRate {
  double sum_rate = 0.0;
  RVec per_user_sinr;  // deterministic-equivalent SINR per user
};

// Large-system deterministic equivalent of the uplink MMSE sum-rate of the
// reference cell. Throws NumericalError if an interference coupling system is
// singular or a deterministic SINR comes out negative beyond rounding.
AsymptoticRate asymptoticSumRate(const XiTable& table);

// Closed form of the same limit for one RRU per cell and uncorrelated
// antennas. `antennas` is a real number on purpose: it may exceed any
// representable array size, which is what the M -> infinity checks need.
double collocatedAsymptoticSumRate(const LargeScaleMap& gains, double antennas,
                                   double pilot_noise, double uplink_noise);

// Same, but first validates that the correlation set really is identity.
double collocatedAsymptoticSumRate(const CorrelationSet& corr, const LargeScaleMap& gains,
                                   double antennas, double pilot_noise, double uplink_noise);

// Infinite-antenna limit, where only pilot contamination survives:
// sum over users of log2(1 + own_gain^2 / sum of interfering gains^2).
// Throws NumericalError when some user faces zero contamination (the limit is
// unbounded).
double contaminationLimit(const LargeScaleMap& gains);

}  // namespace lsasim
