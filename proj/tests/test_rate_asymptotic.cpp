#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lsasim/rate_asymptotic.hpp"
#include "lsasim/types.hpp"

using namespace lsasim;

namespace {

LinkStatistics scalarStats() {
  CorrelationSet corr = CorrelationSet::uniform(2, 1, 1, 1, 0.0);
  LargeScaleMap gains(2, 1, 1);
  gains.at(0, 0, 0) = 1.0;
  gains.at(1, 0, 0) = 0.5;
  return buildLinkStatistics(corr, gains, 0.1, 0.1);
}

LargeScaleMap randomGains(int cells, int users, Rng& rng) {
  LargeScaleMap gains(cells, 1, users);
  for (int l = 0; l < cells; ++l)
    for (int k = 0; k < users; ++k) gains.at(l, 0, k) = 0.05 + rng.uniform();
  return gains;
}

}  // namespace

TEST_CASE("xiCoefficient on the scalar fixture") {
  const LinkStatistics stats = scalarStats();
  // Tr(Q^{-1} A_i Sigma^{-1} A_l) with Q = 1.6, Sigma = 0.81875.
  const double xi01 = xiCoefficient(stats.gram[0], stats.fading_cov[0][0],
                                    stats.fading_cov[1][0], stats.sigma);
  CHECK(xi01 == doctest::Approx(0.5 / (1.6 * 0.81875)).epsilon(1e-14));
  const double xi00 = xiCoefficient(stats.gram[0], stats.fading_cov[0][0],
                                    stats.fading_cov[0][0], stats.sigma);
  CHECK(xi00 == doctest::Approx(1.0 / (1.6 * 0.81875)).epsilon(1e-14));
}

TEST_CASE("scalar deterministic equivalent has the frozen value") {
  const LinkStatistics stats = scalarStats();
  const XiTable table = buildXiTable(stats);
  REQUIRE(table.cells == 2);
  REQUIRE(table.users == 1);
  const AsymptoticRate rate = asymptoticSumRate(table);
  // Frozen by hand: SINR = 0.641025641..., rate = log2(1 + SINR).
  CHECK(rate.per_user_sinr(0) == doctest::Approx(0.641025641025641).epsilon(1e-13));
  CHECK(rate.sum_rate == doctest::Approx(0.71459778113775166).epsilon(1e-13));
}

TEST_CASE("single-cell table reduces to the lone coupling") {
  CorrelationSet corr = CorrelationSet::uniform(1, 1, 1, 1, 0.0);
  LargeScaleMap gains(1, 1, 1);
  gains.at(0, 0, 0) = 1.0;
  const LinkStatistics stats = buildLinkStatistics(corr, gains, 0.1, 0.1);
  const XiTable table = buildXiTable(stats);
  const AsymptoticRate rate = asymptoticSumRate(table);
  CHECK(rate.per_user_sinr(0) == doctest::Approx(table.xi[0](0, 0)).epsilon(1e-15));
}

TEST_CASE("collocated closed form: frozen single-user value") {
  // One cell, one user, gain 1, both noises 0.1, 64 antennas. By hand:
  // q = 1.1, eps = 1 - 1/1.1 = 1/11, sigma^2 = 1/11 + 0.1,
  // SINR = 1 / (q sigma^2 / 64), rate = log2(1 + SINR).
  LargeScaleMap gains(1, 1, 1);
  gains.at(0, 0, 0) = 1.0;
  CHECK(collocatedAsymptoticSumRate(gains, 64.0, 0.1, 0.1) ==
        doctest::Approx(8.256264860584975).epsilon(1e-14));
}

TEST_CASE("collocated closed form matches the general pipeline exactly") {
  // With one RRU and identity correlation the closed form and the full
  // pipeline express the same quantity.
  Rng rng(3);
  const int cells = 3, users = 4, antennas = 32;
  const LargeScaleMap gains = randomGains(cells, users, rng);
  CorrelationSet corr = CorrelationSet::uniform(cells, 1, users, antennas, 0.0);

  // Scale per-RRU gains into the antenna-array link statistics.
  const LinkStatistics stats = buildLinkStatistics(corr, gains, 1e-3, 1e-3);
  const double general = asymptoticSumRate(buildXiTable(stats)).sum_rate;
  const double special =
      collocatedAsymptoticSumRate(corr, gains, static_cast<double>(antennas), 1e-3, 1e-3);
  CHECK(special == doctest::Approx(general).epsilon(1e-9));
}

TEST_CASE("collocated closed form approaches the contamination limit") {
  Rng rng(8);
  const LargeScaleMap gains = randomGains(3, 4, rng);
  const double limit = contaminationLimit(gains);
  const double near = collocatedAsymptoticSumRate(gains, 1e8, 1e-4, 1e-4);
  CHECK(std::abs(near - limit) / limit < 1e-3);
  // Monotone approach: more antennas gets closer.
  const double far = collocatedAsymptoticSumRate(gains, 1e4, 1e-4, 1e-4);
  CHECK(std::abs(near - limit) < std::abs(far - limit));
}

TEST_CASE("contaminationLimit closed form") {
  LargeScaleMap gains(2, 1, 1);
  gains.at(0, 0, 0) = 1.0;
  gains.at(1, 0, 0) = 0.5;
  CHECK(contaminationLimit(gains) == doctest::Approx(std::log2(5.0)).epsilon(1e-14));
}

TEST_CASE("asymptotic helpers reject unsupported shapes") {
  LargeScaleMap distributed(1, 2, 1);
  distributed.at(0, 0, 0) = 1.0;
  distributed.at(0, 1, 0) = 1.0;
  CHECK_THROWS_AS((void)collocatedAsymptoticSumRate(distributed, 8.0, 0.1, 0.1), ConfigError);
  CHECK_THROWS_AS((void)contaminationLimit(distributed), ConfigError);

  // Zero contamination: the infinite-antenna limit diverges.
  LargeScaleMap lone(1, 1, 1);
  lone.at(0, 0, 0) = 1.0;
  CHECK_THROWS_AS((void)contaminationLimit(lone), NumericalError);

  // Correlated antennas are outside the closed form's domain.
  LargeScaleMap gains(2, 1, 1);
  gains.at(0, 0, 0) = 1.0;
  gains.at(1, 0, 0) = 0.5;
  CorrelationSet corr = CorrelationSet::uniform(2, 1, 1, 4, 0.5);
  CHECK_THROWS_AS((void)collocatedAsymptoticSumRate(corr, gains, 4.0, 0.1, 0.1),
                  ConfigError);
}

TEST_CASE("deterministic equivalent is monotone in antenna count") {
  Rng rng(19);
  const LargeScaleMap gains = randomGains(3, 2, rng);
  double previous = 0.0;
  for (int antennas : {8, 32, 128}) {
    CorrelationSet corr = CorrelationSet::uniform(3, 1, 2, antennas, 0.0);
    const LinkStatistics stats = buildLinkStatistics(corr, gains, 1e-6, 1e-6);
    const double rate = asymptoticSumRate(buildXiTable(stats)).sum_rate;
    CHECK(rate > previous);
    previous = rate;
  }
}
