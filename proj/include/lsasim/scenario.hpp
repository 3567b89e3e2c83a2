#pragma once

#include <cstdint>
#include <vector>

#include "lsasim/types.hpp"

namespace lsasim {

// Experiment-level configuration: geometry counts, propagation constants,
// noise powers and the master seed. Everything downstream is a pure function
// of a Scenario plus randomness derived from rng_seed.
//
// Members carry role names; the comments give the config-file keys they load
// from, which follow conventional cellular notation.
struct Scenario {
  int cells = 7;              // cooperating cells, reference cell first (key L)
  int rrus_per_cell = 1;      // remote radio units per cell (key N)
  int antennas_per_rru = 64;  // antennas per RRU (key M)
  int users_per_cell = 4;     // single-antenna users per cell (key K)

  double cell_radius = 500.0;        // hexagon circumradius [m]
  double pathloss_exponent = 3.7;    // power-law exponent
  double shadowing_sigma = 8.0;      // log-normal shadowing std [dB]; 0 disables
  double reference_distance = 1.0;   // path-loss reference d0 [m]
  double min_access_distance = 10.0; // user-RRU exclusion radius [m]

  double pilot_noise = 1e-10;   // noise power on the pilot channel (key gamma_p)
  double uplink_noise = 1e-10;  // noise power on the uplink data channel (key gamma_ul)

  double correlation_coefficient = 0.0;  // exponential antenna correlation, in [0, 1)

  std::uint64_t rng_seed = 1;
  int num_trials = 500;

  int totalAntennas() const { return rrus_per_cell * antennas_per_rru; }

  bool operator==(const Scenario&) const = default;

  // Throws ConfigError naming the offending config key.
  void validate() const;
};

// Positions for one multi-cell deployment. Cell 0 is the reference cell at the
// origin; further cells follow on hexagonal rings around it.
struct Layout {
  double cell_radius = 0.0;
  std::vector<Vec2> cell_centers;
  std::vector<std::vector<Vec2>> rru_positions;   // [cell][rru]
  std::vector<std::vector<Vec2>> user_positions;  // [cell][user], filled by dropUsers

  std::vector<Vec2> allRruPositions() const;
};

// Membership test for the hexagon with circumradius `radius` whose vertices
// lie at multiples of 60 degrees from `center` (neighbour cells then sit
// across the edges, at 30 + k*60 degrees).
bool insideHexagon(const Vec2& point, const Vec2& center, double radius);

// Uniform sample inside such a hexagon (rejection from the bounding square).
Vec2 sampleHexagon(Rng& rng, const Vec2& center, double radius);

// Cell centers plus RRU placement. With one RRU per cell the RRU sits at the
// cell center; with several, one stays at the center and the rest form a ring
// of radius 0.65 * cell_radius.
Layout buildLayout(const Scenario& scenario);

// Uniform user drop per cell, rejecting positions closer than
// min_access_distance to any RRU of any cell. Throws ConfigError when a user
// cannot be placed within the retry budget (infeasible constraints).
Layout dropUsers(const Scenario& scenario, const Layout& layout, Rng& rng);

// Large-scale gains toward the reference cell: entry (cell, rru, user) is the
// gain between RRU `rru` of the *reference* cell and user `user` of cell
// `cell`.
struct LargeScaleMap {
  int cells = 0, rrus = 0, users = 0;
  std::vector<RMat> gain;  // [cell] is rrus x users

  LargeScaleMap() = default;
  LargeScaleMap(int cells, int rrus, int users);

  double operator()(int cell, int rru, int user) const { return gain[cell](rru, user); }
  double& at(int cell, int rru, int user) { return gain[cell](rru, user); }
};

// Path loss with the scenario's exponent beyond the reference distance, times
// independent log-normal shadowing. Distances are clamped below at
// min_access_distance so the power law stays finite for hand-built layouts.
// Shadowing draw order is cells, then RRUs, then users.
LargeScaleMap computeLargeScale(const Scenario& scenario, const Layout& layout, Rng& rng);

}  // namespace lsasim
