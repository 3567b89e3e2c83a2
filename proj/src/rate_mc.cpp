#include "lsasim/rate_mc.hpp"

#include <cmath>

#include "lsasim/numerics.hpp"

namespace lsasim {

namespace {
constexpr std::uint64_t kTrialStream = 0x6d632d7472ULL;
}

double instantaneousSumRate(const std::vector<CMat>& estimated, const CMat& sigma) {
  if (estimated.empty()) {
    throw std::invalid_argument("instantaneousSumRate: need at least the reference cell");
  }
  CMat interference = sigma;
  for (std::size_t l = 1; l < estimated.size(); ++l) {
    interference.noalias() += estimated[l] * estimated[l].adjoint();
  }
  CMat total = interference;
  total.noalias() += estimated[0] * estimated[0].adjoint();
  return log2DetHermitian(total) - log2DetHermitian(interference);
}

ErgodicRate ergodicSumRateMc(const LinkStatistics& stats, int trials, const Rng& base,
                             std::vector<RateSample>* samples) {
  if (trials < 1) throw std::invalid_argument("ergodicSumRateMc: trials must be >= 1");

  std::vector<double> values(static_cast<std::size_t>(trials));
  parallelFor(trials, [&](int t) {
    Rng rng = base.derive(kTrialStream, static_cast<std::uint64_t>(t));
    const std::vector<CMat> estimated = sampleEstimatedChannels(stats, rng);
    values[static_cast<std::size_t>(t)] = instantaneousSumRate(estimated, stats.sigma);
  });

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / trials;
  double ssd = 0.0;
  for (double v : values) ssd += (v - mean) * (v - mean);
  const double std_error = trials > 1 ? std::sqrt(ssd / (static_cast<double>(trials) * (trials - 1))) : 0.0;

  if (samples) {
    samples->clear();
    samples->reserve(values.size());
    for (int t = 0; t < trials; ++t) {
      samples->push_back({values[static_cast<std::size_t>(t)], t});
    }
  }
  return {mean, std_error, trials};
}

}  // namespace lsasim
