#include "lsasim/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lsasim {

namespace {

constexpr int kDropRetryBudget = 10000;
constexpr double kRruRingFraction = 0.65;

// Direction toward the k-th neighbouring cell center: 30 + k*60 degrees.
Vec2 neighborDirection(int k) {
  const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
  return {std::cos(angle), std::sin(angle)};
}

// Hexagonal lattice centers: origin first, then concentric rings until at
// least `count` cells exist.
std::vector<Vec2> cellCenters(int count, double cell_radius) {
  const double spacing = std::sqrt(3.0) * cell_radius;
  std::vector<Vec2> centers;
  centers.reserve(static_cast<std::size_t>(count));
  centers.emplace_back(0.0, 0.0);
  for (int ring = 1; static_cast<int>(centers.size()) < count; ++ring) {
    // Walk the ring: start on one corner, take `ring` steps along each side.
    Vec2 pos = spacing * ring * neighborDirection(4);
    for (int side = 0; side < 6 && static_cast<int>(centers.size()) < count; ++side) {
      for (int step = 0; step < ring && static_cast<int>(centers.size()) < count; ++step) {
        centers.emplace_back(pos);
        pos += spacing * neighborDirection(side);
      }
    }
  }
  return centers;
}

}  // namespace

void Scenario::validate() const {
  auto requireCount = [](int value, const char* key) {
    if (value < 1) throw ConfigError(std::string(key) + " must be >= 1");
  };
  requireCount(cells, "L");
  requireCount(rrus_per_cell, "N");
  requireCount(antennas_per_rru, "M");
  requireCount(users_per_cell, "K");
  requireCount(num_trials, "num_trials");

  auto requirePositive = [](double value, const char* key) {
    if (!(value > 0.0)) throw ConfigError(std::string(key) + " must be > 0");
  };
  requirePositive(cell_radius, "cell_radius");
  requirePositive(pathloss_exponent, "pathloss_exponent");
  requirePositive(reference_distance, "reference_distance");
  requirePositive(min_access_distance, "min_access_distance");
  requirePositive(pilot_noise, "gamma_p");
  requirePositive(uplink_noise, "gamma_ul");

  if (!(shadowing_sigma >= 0.0)) throw ConfigError("shadowing_sigma must be >= 0");
  if (!(correlation_coefficient >= 0.0 && correlation_coefficient < 1.0)) {
    throw ConfigError("correlation_coefficient must lie in [0, 1)");
  }
}

std::vector<Vec2> Layout::allRruPositions() const {
  std::vector<Vec2> all;
  for (const auto& cell : rru_positions) all.insert(all.end(), cell.begin(), cell.end());
  return all;
}

bool insideHexagon(const Vec2& point, const Vec2& center, double radius) {
  const Vec2 d = point - center;
  const double apothem = std::sqrt(3.0) / 2.0 * radius;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d.dot(neighborDirection(i))) > apothem) return false;
  }
  return true;
}

Vec2 sampleHexagon(Rng& rng, const Vec2& center, double radius) {
  // Rejection from the bounding square; acceptance probability ~0.65.
  for (;;) {
    const double x = rng.uniform(-radius, radius);
    const double y = rng.uniform(-radius, radius);
    const Vec2 candidate = center + Vec2(x, y);
    if (insideHexagon(candidate, center, radius)) return candidate;
  }
}

Layout buildLayout(const Scenario& scenario) {
  Layout layout;
  layout.cell_radius = scenario.cell_radius;
  layout.cell_centers = cellCenters(scenario.cells, scenario.cell_radius);
  layout.rru_positions.resize(layout.cell_centers.size());
  for (std::size_t c = 0; c < layout.cell_centers.size(); ++c) {
    auto& rrus = layout.rru_positions[c];
    rrus.push_back(layout.cell_centers[c]);
    const int ring_count = scenario.rrus_per_cell - 1;
    for (int i = 0; i < ring_count; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / ring_count;
      rrus.push_back(layout.cell_centers[c] +
                     kRruRingFraction * scenario.cell_radius * Vec2(std::cos(angle), std::sin(angle)));
    }
  }
  layout.user_positions.assign(layout.cell_centers.size(), {});
  return layout;
}

Layout dropUsers(const Scenario& scenario, const Layout& layout, Rng& rng) {
  Layout result = layout;
  const std::vector<Vec2> all_rrus = result.allRruPositions();
  result.user_positions.assign(result.cell_centers.size(), {});
  for (std::size_t c = 0; c < result.cell_centers.size(); ++c) {
    for (int k = 0; k < scenario.users_per_cell; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kDropRetryBudget; ++attempt) {
        const Vec2 candidate = sampleHexagon(rng, result.cell_centers[c], scenario.cell_radius);
        bool clear = true;
        for (const Vec2& rru : all_rrus) {
          if ((candidate - rru).norm() < scenario.min_access_distance) {
            clear = false;
            break;
          }
        }
        if (clear) {
          result.user_positions[c].push_back(candidate);
          placed = true;
          break;
        }
      }
      if (!placed) {
        throw ConfigError(
            "dropUsers: could not place a user outside min_access_distance of every RRU; "
            "min_access_distance is too large for this layout");
      }
    }
  }
  return result;
}

LargeScaleMap::LargeScaleMap(int cells, int rrus, int users)
    : cells(cells), rrus(rrus), users(users) {
  gain.assign(static_cast<std::size_t>(cells), RMat::Zero(rrus, users));
}

LargeScaleMap computeLargeScale(const Scenario& scenario, const Layout& layout, Rng& rng) {
  const int cells = static_cast<int>(layout.cell_centers.size());
  LargeScaleMap map(cells, scenario.rrus_per_cell, scenario.users_per_cell);
  const auto& reference_rrus = layout.rru_positions.at(0);
  for (int l = 0; l < cells; ++l) {
    if (static_cast<int>(layout.user_positions.at(l).size()) < scenario.users_per_cell) {
      throw std::invalid_argument("computeLargeScale: layout is missing user positions");
    }
    for (int n = 0; n < scenario.rrus_per_cell; ++n) {
      for (int k = 0; k < scenario.users_per_cell; ++k) {
        const Vec2& user = layout.user_positions.at(l).at(k);
        const double d = std::max((user - reference_rrus.at(n)).norm(),
                                  scenario.min_access_distance);
        double lambda = std::pow(d / scenario.reference_distance, -scenario.pathloss_exponent);
        if (scenario.shadowing_sigma > 0.0) {
          const double shadow_db = scenario.shadowing_sigma * rng.gaussian();
          lambda *= std::pow(10.0, shadow_db / 10.0);
        }
        map.at(l, n, k) = lambda;
      }
    }
  }
  return map;
}

}  // namespace lsasim
