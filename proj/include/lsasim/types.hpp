#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace lsasim {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

// Invalid configuration: bad keys, out-of-range values, infeasible geometry.
// The simulate CLI maps this to its config-error exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure at runtime: singular solves, indefinite covariances,
// degenerate limits. The simulate CLI maps this to its own exit code.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic random generator with cheap derived substreams.
//
// Monte Carlo code derives one child per (purpose, trial) pair from a root
// generator, so every trial is reproducible on its own, independent of
// execution order and of how many draws other trials consume.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Child generator for a named substream; deterministic in (seed, ids).
  Rng derive(std::uint64_t stream) const;
  Rng derive(std::uint64_t stream, std::uint64_t substream) const;

  double uniform();                      // U[0, 1)
  double uniform(double lo, double hi);  // U[lo, hi)
  double gaussian();                     // N(0, 1)
  Complex complexGaussian();             // CN(0, 1): re, im ~ N(0, 1/2)

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Runs fn(0), ..., fn(n-1), possibly across threads. Callers must write
// results into per-index storage and reduce sequentially afterwards, so that
// the outcome never depends on scheduling. The first exception thrown by any
// index is rethrown after all workers finish.
void parallelFor(int n, const std::function<void(int)>& fn);

}  // namespace lsasim
