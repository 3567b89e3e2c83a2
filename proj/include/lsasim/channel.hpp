#pragma once

#include <vector>

#include "lsasim/scenario.hpp"
#include "lsasim/types.hpp"

namespace lsasim {

// size x size exponential correlation matrix: entry (i, j) = coeff^|i-j|.
CMat exponentialCorrelation(int size, double coeff);

// Per-RRU antenna correlation. Every (cell, rru, user) triple currently
// shares one block; the accessors keep call sites independent of that choice.
struct CorrelationSet {
  int cells = 0, rrus = 0, users = 0, antennas = 0;
  CMat block;       // antennas x antennas, Hermitian PSD, unit diagonal
  CMat block_sqrt;  // cached PSD square root of `block`

  // Exponential correlation with the given coefficient on every RRU.
  static CorrelationSet uniform(int cells, int rrus, int users, int antennas, double coeff);

  const CMat& blockFor(int cell, int rru, int user) const;
  const CMat& blockSqrtFor(int cell, int rru, int user) const;
  bool isIdentity(double tol = 1e-12) const;
};

// i.i.d. CN(0, 1) vector / column-major matrix.
CVec complexGaussianVector(Rng& rng, int dim);
CMat complexGaussianMatrix(Rng& rng, int rows, int cols);

// One user's channel toward the reference cell, assembled per RRU block:
// block n is sqrt(rru_gains[n]) * R_n^{1/2} * smallscale_n, stacked into a
// vector of length rrus * antennas.
CVec assembleChannel(const CorrelationSet& corr, int cell, int user, const RVec& rru_gains,
                     const CVec& smallscale);

// Channels of every user toward the reference cell for one coherence
// interval. channels[cell] is (rrus * antennas) x users; smallscale[cell]
// holds the matching i.i.d. draws (one column per user, drawn user-by-user).
struct ChannelSet {
  std::vector<CMat> channels;
  std::vector<CMat> smallscale;
};

ChannelSet sampleChannels(const CorrelationSet& corr, const LargeScaleMap& gains, Rng& rng);

}  // namespace lsasim
