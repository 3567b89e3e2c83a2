#pragma once

#include <vector>

#include "lsasim/estimation.hpp"
#include "lsasim/types.hpp"

namespace lsasim {

// One conditional (per coherence interval) sum-rate draw.
struct RateSample {
  double value = 0.0;
  int trial = 0;
};

// Monte Carlo mean with its standard error.
struct ErgodicRate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

// Uplink sum-rate of the reference cell for one channel-estimate draw:
// log2 det over (all cells' estimates plus sigma) minus log2 det over
// (interfering cells' estimates plus sigma). estimated[0] is the reference
// cell.
double instantaneousSumRate(const std::vector<CMat>& estimated, const CMat& sigma);

// Ergodic uplink sum-rate by Monte Carlo over channel estimates. Trial t
// draws from base.derive(stream, t), so results are reproducible and
// independent of execution order; the reduction over trials is sequential.
// Optionally exposes the per-trial samples.
ErgodicRate ergodicSumRateMc(const LinkStatistics& stats, int trials, const Rng& base,
                             std::vector<RateSample>* samples = nullptr);

}  // namespace lsasim
