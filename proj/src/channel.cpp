#include "lsasim/channel.hpp"

#include <cmath>

#include "lsasim/numerics.hpp"

namespace lsasim {

CMat exponentialCorrelation(int size, double coeff) {
  if (size < 1) throw std::invalid_argument("exponentialCorrelation: size must be >= 1");
  if (!(coeff >= 0.0 && coeff < 1.0)) {
    throw ConfigError("correlation_coefficient must lie in [0, 1)");
  }
  CMat r(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      r(i, j) = Complex(std::pow(coeff, std::abs(i - j)), 0.0);
    }
  }
  return r;
}

CorrelationSet CorrelationSet::uniform(int cells, int rrus, int users, int antennas,
                                       double coeff) {
  CorrelationSet set;
  set.cells = cells;
  set.rrus = rrus;
  set.users = users;
  set.antennas = antennas;
  set.block = exponentialCorrelation(antennas, coeff);
  set.block_sqrt = hermitianSqrt(set.block);
  return set;
}

const CMat& CorrelationSet::blockFor(int, int, int) const { return block; }

const CMat& CorrelationSet::blockSqrtFor(int, int, int) const { return block_sqrt; }

bool CorrelationSet::isIdentity(double tol) const {
  return (block - CMat::Identity(antennas, antennas)).cwiseAbs().maxCoeff() <= tol;
}

CVec complexGaussianVector(Rng& rng, int dim) {
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complexGaussian();
  return v;
}

CMat complexGaussianMatrix(Rng& rng, int rows, int cols) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complexGaussian();
  }
  return m;
}

CVec assembleChannel(const CorrelationSet& corr, int cell, int user, const RVec& rru_gains,
                     const CVec& smallscale) {
  const int antennas = corr.antennas;
  const int rrus = static_cast<int>(rru_gains.size());
  if (smallscale.size() != static_cast<Eigen::Index>(rrus) * antennas) {
    throw std::invalid_argument("assembleChannel: small-scale vector has the wrong length");
  }
  CVec g(smallscale.size());
  for (int n = 0; n < rrus; ++n) {
    const double gain = rru_gains(n);
    if (gain < 0.0) throw std::invalid_argument("assembleChannel: negative large-scale gain");
    g.segment(n * antennas, antennas).noalias() =
        std::sqrt(gain) * (corr.blockSqrtFor(cell, n, user) * smallscale.segment(n * antennas, antennas));
  }
  return g;
}

ChannelSet sampleChannels(const CorrelationSet& corr, const LargeScaleMap& gains, Rng& rng) {
  const int dim = gains.rrus * corr.antennas;
  ChannelSet set;
  set.channels.assign(static_cast<std::size_t>(gains.cells), CMat(dim, gains.users));
  set.smallscale.assign(static_cast<std::size_t>(gains.cells), CMat(dim, gains.users));
  for (int l = 0; l < gains.cells; ++l) {
    for (int k = 0; k < gains.users; ++k) {
      const CVec h = complexGaussianVector(rng, dim);
      set.smallscale[l].col(k) = h;
      set.channels[l].col(k) = assembleChannel(corr, l, k, gains.gain[l].col(k), h);
    }
  }
  return set;
}

}  // namespace lsasim
