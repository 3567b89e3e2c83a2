#include "lsasim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "lsasim/channel.hpp"
#include "lsasim/estimation.hpp"
#include "lsasim/numerics.hpp"
#include "lsasim/rate_asymptotic.hpp"
#include "lsasim/rate_mc.hpp"

namespace lsasim {

namespace {

// Named substreams off the root generator; constants pin the seeding layout.
constexpr std::uint64_t kStreamUsers = 11;
constexpr std::uint64_t kStreamShadowing = 12;
constexpr std::uint64_t kStreamRates = 13;
constexpr std::uint64_t kStreamMismatch = 14;
constexpr std::uint64_t kStreamDrop = 15;
constexpr std::uint64_t kStreamCalibration = 16;

constexpr double kCalibrationDefaultTheta = std::numbers::pi / 3.0;
constexpr double kCalibrationDefaultAmplitudeDb = 3.0;

std::string formatValue(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

std::string formatDouble(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

bool isCount(double v) { return std::floor(v) == v && v >= 1.0 && v <= 1e9; }

int checkedCount(std::int64_t v, const char* key) {
  if (v < 1 || v > 1000000000) {
    throw ConfigError(std::string(key) + " must be a count between 1 and 1e9");
  }
  return static_cast<int>(v);
}

// Scenario for one sweep point of the uplink kinds.
Scenario scenarioForSweepValue(const Scenario& base, const std::string& parameter, double v) {
  Scenario s = base;
  auto asCount = [&](const char* key) {
    if (!isCount(v)) {
      throw ConfigError(std::string("sweep value for ") + key + " must be a positive integer");
    }
    return static_cast<int>(v);
  };
  if (parameter == "M") {
    s.antennas_per_rru = asCount("M");
  } else if (parameter == "N") {
    s.rrus_per_cell = asCount("N");
  } else if (parameter == "K") {
    s.users_per_cell = asCount("K");
  } else if (parameter == "L") {
    s.cells = asCount("L");
  } else if (parameter == "gamma_p") {
    s.pilot_noise = v;
  } else if (parameter == "gamma_ul") {
    s.uplink_noise = v;
  } else if (parameter == "correlation_coefficient") {
    s.correlation_coefficient = v;
  } else if (parameter == "cell_radius") {
    s.cell_radius = v;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  s.validate();
  return s;
}

// Mismatch configuration for one sweep point of the reciprocity kinds.
MismatchConfig mismatchForSweepValue(const MismatchConfig& base, const std::string& parameter,
                                     double v) {
  MismatchConfig m = base;
  auto variance = [&] {
    if (v < 0.0) {
      throw ConfigError("sweep value for " + parameter + " must be >= 0 dB");
    }
    return MismatchConfig::dbSpreadToVariance(v);
  };
  if (parameter == "theta_bs") {
    m.theta_bs_t = m.theta_bs_r = v;
  } else if (parameter == "theta_ue") {
    m.theta_ue_t = m.theta_ue_r = v;
  } else if (parameter == "theta_bs_t") {
    m.theta_bs_t = v;
  } else if (parameter == "theta_bs_r") {
    m.theta_bs_r = v;
  } else if (parameter == "theta_ue_t") {
    m.theta_ue_t = v;
  } else if (parameter == "theta_ue_r") {
    m.theta_ue_r = v;
  } else if (parameter == "delta2_bs_db") {
    m.delta2_bs_t = m.delta2_bs_r = variance();
  } else if (parameter == "delta2_ue_db") {
    m.delta2_ue_t = m.delta2_ue_r = variance();
  } else if (parameter == "delta2_bs_t_db") {
    m.delta2_bs_t = variance();
  } else if (parameter == "delta2_bs_r_db") {
    m.delta2_bs_r = variance();
  } else if (parameter == "delta2_ue_t_db") {
    m.delta2_ue_t = variance();
  } else if (parameter == "delta2_ue_r_db") {
    m.delta2_ue_r = variance();
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  m.validate();
  return m;
}

bool usesScenarioSweep(ExperimentKind kind) {
  return kind == ExperimentKind::kUplinkErgodic ||
         kind == ExperimentKind::kUplinkAsymptoticCompare;
}

bool usesMismatchSweep(ExperimentKind kind) {
  return kind == ExperimentKind::kMismatchPhaseSweep ||
         kind == ExperimentKind::kMismatchAmplitudeSweep;
}

// Re-throws module errors with the failing sweep point attached.
template <typename Fn>
void annotateSweepValue(double v, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError("sweep value " + formatValue(v) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("sweep value " + formatValue(v) + ": " + e.what());
  }
}

void runUplink(const ExperimentSpec& spec, bool with_deterministic,
               std::vector<ResultRow>& rows) {
  const Rng root(spec.scenario.rng_seed);
  for (double v : spec.sweep.values) {
    annotateSweepValue(v, [&] {
      const Scenario s = scenarioForSweepValue(spec.scenario, spec.sweep.parameter, v);
      const Layout layout = buildLayout(s);
      Rng user_rng = root.derive(kStreamUsers);
      const Layout dropped = dropUsers(s, layout, user_rng);
      Rng shadow_rng = root.derive(kStreamShadowing);
      const LargeScaleMap gains = computeLargeScale(s, dropped, shadow_rng);
      const CorrelationSet corr =
          CorrelationSet::uniform(s.cells, s.rrus_per_cell, s.users_per_cell,
                                  s.antennas_per_rru, s.correlation_coefficient);
      const LinkStatistics stats =
          buildLinkStatistics(corr, gains, s.pilot_noise, s.uplink_noise);
      const ErgodicRate rate = ergodicSumRateMc(stats, s.num_trials, root.derive(kStreamRates));
      rows.push_back({v, "sum_rate_mc", rate.mean, rate.std_error, rate.trials, s.rng_seed});
      if (with_deterministic) {
        const AsymptoticRate det = asymptoticSumRate(buildXiTable(stats));
        rows.push_back({v, "sum_rate_deterministic", det.sum_rate, 0.0, 0, s.rng_seed});
        rows.push_back({v, "absolute_gap", std::abs(rate.mean - det.sum_rate), rate.std_error,
                        rate.trials, s.rng_seed});
      }
    });
  }
}

void runDistributedVsCollocated(const ExperimentSpec& spec, std::vector<ResultRow>& rows) {
  const Scenario& distributed = spec.scenario;
  Scenario collocated = distributed;
  collocated.rrus_per_cell = 1;
  collocated.antennas_per_rru = distributed.totalAntennas();

  const CorrelationSet corr_dist = CorrelationSet::uniform(
      distributed.cells, distributed.rrus_per_cell, distributed.users_per_cell,
      distributed.antennas_per_rru, distributed.correlation_coefficient);
  const CorrelationSet corr_coll = CorrelationSet::uniform(
      collocated.cells, collocated.rrus_per_cell, collocated.users_per_cell,
      collocated.antennas_per_rru, collocated.correlation_coefficient);
  const Layout base_dist = buildLayout(distributed);
  const Layout base_coll = buildLayout(collocated);

  const Rng root(distributed.rng_seed);
  const int drops = distributed.num_trials;
  int wins = 0;
  double ratio_sum = 0.0, ratio_ssd = 0.0;
  std::vector<double> ratios(static_cast<std::size_t>(drops));
  for (int d = 0; d < drops; ++d) {
    const Rng drop_rng = root.derive(kStreamDrop, static_cast<std::uint64_t>(d));
    // Users are placed once under the distributed constraint set (a superset
    // of the collocated one: the center RRU is present in both) and shared by
    // the two architectures; shadowing is drawn independently per
    // architecture.
    Rng user_rng = drop_rng.derive(1);
    const Layout dropped_dist = dropUsers(distributed, base_dist, user_rng);
    Layout dropped_coll = base_coll;
    dropped_coll.user_positions = dropped_dist.user_positions;

    Rng shadow_dist = drop_rng.derive(2);
    const LargeScaleMap gains_dist = computeLargeScale(distributed, dropped_dist, shadow_dist);
    Rng shadow_coll = drop_rng.derive(3);
    const LargeScaleMap gains_coll = computeLargeScale(collocated, dropped_coll, shadow_coll);

    const double rate_dist =
        asymptoticSumRate(buildXiTable(buildLinkStatistics(
                              corr_dist, gains_dist, distributed.pilot_noise,
                              distributed.uplink_noise)))
            .sum_rate;
    const double rate_coll =
        asymptoticSumRate(buildXiTable(buildLinkStatistics(
                              corr_coll, gains_coll, collocated.pilot_noise,
                              collocated.uplink_noise)))
            .sum_rate;
    const double value = static_cast<double>(d);
    rows.push_back({value, "distributed_rate", rate_dist, 0.0, 1, distributed.rng_seed});
    rows.push_back({value, "collocated_rate", rate_coll, 0.0, 1, distributed.rng_seed});
    const double ratio = rate_dist / rate_coll;
    rows.push_back({value, "rate_ratio", ratio, 0.0, 1, distributed.rng_seed});
    ratios[static_cast<std::size_t>(d)] = ratio;
    if (rate_dist > rate_coll) ++wins;
  }

  for (double r : ratios) ratio_sum += r;
  const double ratio_mean = ratio_sum / drops;
  for (double r : ratios) ratio_ssd += (r - ratio_mean) * (r - ratio_mean);
  const double ratio_se =
      drops > 1 ? std::sqrt(ratio_ssd / (static_cast<double>(drops) * (drops - 1))) : 0.0;
  const double win_fraction = static_cast<double>(wins) / drops;
  const double win_se = std::sqrt(std::max(win_fraction * (1.0 - win_fraction), 0.0) / drops);
  rows.push_back({-1.0, "distributed_win_fraction", win_fraction, win_se, drops,
                  distributed.rng_seed});
  rows.push_back({-1.0, "mean_rate_ratio", ratio_mean, ratio_se, drops, distributed.rng_seed});
}

void runMismatchSweep(const ExperimentSpec& spec, std::vector<ResultRow>& rows) {
  const Scenario& s = spec.scenario;
  const int antennas = s.totalAntennas();
  const int users = s.users_per_cell;
  const double snr = std::pow(10.0, spec.snr_db / 10.0);
  const Rng root(s.rng_seed);
  for (double v : spec.sweep.values) {
    annotateSweepValue(v, [&] {
      const MismatchConfig config =
          mismatchForSweepValue(spec.mismatch, spec.sweep.parameter, v);
      const MismatchErgodicResult res = ergodicZfMismatch(
          antennas, users, snr, config, s.num_trials, root.derive(kStreamMismatch));
      rows.push_back({v, "rate_mismatched", res.mismatched.mean, res.mismatched.std_error,
                      res.mismatched.trials, s.rng_seed});
      rows.push_back({v, "rate_perfect", res.perfect.mean, res.perfect.std_error,
                      res.perfect.trials, s.rng_seed});
      rows.push_back({v, "normalized_loss", res.loss, res.loss_std_error, res.mismatched.trials,
                      s.rng_seed});
      if (users >= 2 && antennas > users) {
        const MismatchBound bound = mismatchBound(antennas, users, snr, config);
        if (bound.degenerate) {
          rows.push_back({v, "rate_lower_bound_degenerate", 1.0, 0.0, 0, s.rng_seed});
        } else {
          rows.push_back({v, "rate_lower_bound", bound.lowerBound(), 0.0, 0, s.rng_seed});
        }
      }
    });
  }
}

void runCalibrationCheck(const ExperimentSpec& spec, std::vector<ResultRow>& rows) {
  const Scenario& s = spec.scenario;
  const int antennas = s.totalAntennas();
  const int users = s.users_per_cell;
  const Rng root(s.rng_seed);

  double worst = 0.0;
  for (int t = 0; t < s.num_trials; ++t) {
    Rng rng = root.derive(kStreamCalibration, static_cast<std::uint64_t>(t));
    const CMat propagation = complexGaussianMatrix(rng, users, antennas);
    const RfGains gains = sampleRfGains(antennas, users, spec.mismatch, rng);
    const EffectiveChannels eff = effectiveChannels(propagation, gains);
    const CMat precoder = calibratedZfPrecoder(eff.uplink, gains.bs_t, gains.bs_r);
    const CMat coupling = eff.downlink * precoder;
    double diag = 0.0, off = 0.0;
    for (Eigen::Index i = 0; i < coupling.rows(); ++i) {
      for (Eigen::Index j = 0; j < coupling.cols(); ++j) {
        (i == j ? diag : off) += std::norm(coupling(i, j));
      }
    }
    worst = std::max(worst, std::sqrt(off) / std::sqrt(diag));
  }
  rows.push_back({0.0, "max_offdiagonal_ratio", worst, 0.0, s.num_trials, s.rng_seed});

  // With unit gains the calibrated and plain precoders run through identical
  // arithmetic; report whether the outputs agree exactly.
  Rng rng = root.derive(kStreamCalibration, static_cast<std::uint64_t>(s.num_trials));
  const CMat propagation = complexGaussianMatrix(rng, users, antennas);
  const CMat uplink = propagation.transpose();
  const CMat plain = zfPrecoder(uplink);
  const CVec ones = CVec::Ones(antennas);
  const CMat calibrated = calibratedZfPrecoder(uplink, ones, ones);
  const bool match = (calibrated.array() == plain.array()).all();
  rows.push_back({0.0, "unit_gain_exact_match", match ? 1.0 : 0.0, 0.0, 1, s.rng_seed});
}

}  // namespace

const char* toString(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kUplinkErgodic: return "uplink-ergodic";
    case ExperimentKind::kUplinkAsymptoticCompare: return "uplink-asymptotic-compare";
    case ExperimentKind::kDistributedVsCollocated: return "distributed-vs-collocated";
    case ExperimentKind::kMismatchPhaseSweep: return "mismatch-phase-sweep";
    case ExperimentKind::kMismatchAmplitudeSweep: return "mismatch-amplitude-sweep";
    case ExperimentKind::kCalibrationCheck: return "calibration-check";
  }
  return "unknown";
}

ExperimentKind experimentKindFromString(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::kUplinkErgodic, ExperimentKind::kUplinkAsymptoticCompare,
        ExperimentKind::kDistributedVsCollocated, ExperimentKind::kMismatchPhaseSweep,
        ExperimentKind::kMismatchAmplitudeSweep, ExperimentKind::kCalibrationCheck}) {
    if (name == toString(kind)) return kind;
  }
  throw ConfigError("unknown experiment kind '" + name +
                    "' (expected one of uplink-ergodic, uplink-asymptotic-compare, "
                    "distributed-vs-collocated, mismatch-phase-sweep, "
                    "mismatch-amplitude-sweep, calibration-check)");
}

const std::vector<std::string>& allowedSweepParameters(ExperimentKind kind) {
  static const std::vector<std::string> scenario_params = {
      "M", "N", "K", "L", "gamma_p", "gamma_ul", "correlation_coefficient", "cell_radius"};
  static const std::vector<std::string> phase_params = {
      "theta_bs", "theta_ue", "theta_bs_t", "theta_bs_r", "theta_ue_t", "theta_ue_r"};
  static const std::vector<std::string> amplitude_params = {
      "delta2_bs_db", "delta2_ue_db", "delta2_bs_t_db", "delta2_bs_r_db", "delta2_ue_t_db",
      "delta2_ue_r_db"};
  static const std::vector<std::string> none;
  switch (kind) {
    case ExperimentKind::kUplinkErgodic:
    case ExperimentKind::kUplinkAsymptoticCompare: return scenario_params;
    case ExperimentKind::kMismatchPhaseSweep: return phase_params;
    case ExperimentKind::kMismatchAmplitudeSweep: return amplitude_params;
    default: return none;
  }
}

void ExperimentSpec::validate() const {
  scenario.validate();
  mismatch.validate();

  const auto& allowed = allowedSweepParameters(kind);
  if (allowed.empty()) {
    if (!sweep.parameter.empty() || !sweep.values.empty()) {
      throw ConfigError(std::string("experiment kind '") + toString(kind) +
                        "' does not take a sweep");
    }
  } else {
    if (sweep.parameter.empty() || sweep.values.empty()) {
      throw ConfigError(std::string("experiment kind '") + toString(kind) +
                        "' requires a sweep with parameter and values");
    }
    bool ok = false;
    for (const auto& p : allowed) ok = ok || p == sweep.parameter;
    if (!ok) {
      std::string valid;
      for (const auto& p : allowed) valid += (valid.empty() ? "" : ", ") + p;
      throw ConfigError("sweep parameter '" + sweep.parameter + "' is not valid for kind '" +
                        toString(kind) + "' (valid: " + valid + ")");
    }
    // Fail fast on out-of-range points instead of mid-run.
    for (double v : sweep.values) {
      if (usesScenarioSweep(kind)) {
        (void)scenarioForSweepValue(scenario, sweep.parameter, v);
      } else {
        (void)mismatchForSweepValue(mismatch, sweep.parameter, v);
      }
    }
  }

  if (kind == ExperimentKind::kDistributedVsCollocated && scenario.rrus_per_cell < 2) {
    throw ConfigError(
        "distributed-vs-collocated requires N >= 2 (the scenario describes the distributed "
        "side; the collocated side gets N = 1 with the same total antenna count)");
  }
  if ((usesMismatchSweep(kind) || kind == ExperimentKind::kCalibrationCheck) &&
      scenario.users_per_cell > scenario.totalAntennas()) {
    throw ConfigError("zero forcing requires K <= N * M total antennas");
  }
}

ExperimentSpec parseExperimentSpec(const std::string& text, const std::string& origin) {
  ConfigFile config = ConfigFile::parse(text, origin);
  ExperimentSpec spec;

  spec.kind = experimentKindFromString(
      config.getString("experiment", "kind", toString(spec.kind)));
  spec.snr_db = config.getReal("experiment", "snr_db", spec.snr_db);
  spec.output_path = config.getString("experiment", "output", spec.output_path);

  Scenario& s = spec.scenario;
  s.cells = checkedCount(config.getInt("scenario", "L", s.cells), "L");
  s.rrus_per_cell = checkedCount(config.getInt("scenario", "N", s.rrus_per_cell), "N");
  s.antennas_per_rru = checkedCount(config.getInt("scenario", "M", s.antennas_per_rru), "M");
  s.users_per_cell = checkedCount(config.getInt("scenario", "K", s.users_per_cell), "K");
  s.cell_radius = config.getReal("scenario", "cell_radius", s.cell_radius);
  s.pathloss_exponent = config.getReal("scenario", "pathloss_exponent", s.pathloss_exponent);
  s.shadowing_sigma = config.getReal("scenario", "shadowing_sigma", s.shadowing_sigma);
  s.reference_distance = config.getReal("scenario", "reference_distance", s.reference_distance);
  s.min_access_distance =
      config.getReal("scenario", "min_access_distance", s.min_access_distance);
  s.pilot_noise = config.getReal("scenario", "gamma_p", s.pilot_noise);
  s.uplink_noise = config.getReal("scenario", "gamma_ul", s.uplink_noise);
  s.correlation_coefficient =
      config.getReal("scenario", "correlation_coefficient", s.correlation_coefficient);
  s.rng_seed = config.getUint("scenario", "rng_seed", s.rng_seed);
  s.num_trials = checkedCount(config.getInt("scenario", "num_trials", s.num_trials),
                              "num_trials");

  spec.mismatch_given = config.hasSection("mismatch");
  if (spec.mismatch_given) {
    MismatchConfig& m = spec.mismatch;
    m.theta_bs_t = config.getReal("mismatch", "theta_bs_t", m.theta_bs_t);
    m.theta_bs_r = config.getReal("mismatch", "theta_bs_r", m.theta_bs_r);
    m.theta_ue_t = config.getReal("mismatch", "theta_ue_t", m.theta_ue_t);
    m.theta_ue_r = config.getReal("mismatch", "theta_ue_r", m.theta_ue_r);
    // Variances: natural units directly, or as a dB spread -- not both.
    auto variance = [&](const char* nat_key, const char* db_key, double fallback) {
      if (config.has("mismatch", nat_key) && config.has("mismatch", db_key)) {
        throw ConfigError(std::string("specify only one of '") + nat_key + "' and '" + db_key +
                          "'");
      }
      if (config.has("mismatch", db_key)) {
        const double db = config.getReal("mismatch", db_key, 0.0);
        if (db < 0.0) throw ConfigError(std::string(db_key) + " must be >= 0");
        return MismatchConfig::dbSpreadToVariance(db);
      }
      return config.getReal("mismatch", nat_key, fallback);
    };
    m.delta2_bs_t = variance("delta2_bs_t", "delta2_bs_t_db", m.delta2_bs_t);
    m.delta2_bs_r = variance("delta2_bs_r", "delta2_bs_r_db", m.delta2_bs_r);
    m.delta2_ue_t = variance("delta2_ue_t", "delta2_ue_t_db", m.delta2_ue_t);
    m.delta2_ue_r = variance("delta2_ue_r", "delta2_ue_r_db", m.delta2_ue_r);
  } else if (spec.kind == ExperimentKind::kCalibrationCheck) {
    // Default to a clearly nonzero mismatch so the residual check exercises
    // random gains rather than passing trivially with all-ones chains.
    MismatchConfig& m = spec.mismatch;
    m.theta_bs_t = m.theta_bs_r = m.theta_ue_t = m.theta_ue_r = kCalibrationDefaultTheta;
    m.delta2_bs_t = m.delta2_bs_r = m.delta2_ue_t = m.delta2_ue_r =
        MismatchConfig::dbSpreadToVariance(kCalibrationDefaultAmplitudeDb);
  }

  if (config.hasSection("sweep")) {
    spec.sweep.parameter = config.getString("sweep", "parameter", "");
    spec.sweep.values = config.getRealList("sweep", "values", {});
    if (spec.sweep.parameter.empty()) {
      throw ConfigError("[sweep] requires both 'parameter' and 'values'");
    }
  } else {
    // Documented default sweeps.
    switch (spec.kind) {
      case ExperimentKind::kUplinkErgodic:
        spec.sweep = {"M", {static_cast<double>(s.antennas_per_rru)}};
        break;
      case ExperimentKind::kUplinkAsymptoticCompare:
        spec.sweep = {"M", {16.0, 64.0, 256.0}};
        break;
      case ExperimentKind::kMismatchPhaseSweep:
        spec.sweep = {"theta_bs", {0.0, std::numbers::pi / 6.0, std::numbers::pi / 3.0}};
        break;
      case ExperimentKind::kMismatchAmplitudeSweep:
        spec.sweep = {"delta2_bs_db", {0.0, 1.0, 3.0}};
        break;
      default: break;  // kinds without a sweep
    }
  }

  config.requireAllConsumed({"experiment", "scenario", "mismatch", "sweep"});
  spec.validate();
  return spec;
}

ExperimentSpec loadExperimentSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseExperimentSpec(buffer.str(), path);
}

std::string serializeExperimentSpec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "kind = " << toString(spec.kind) << "\n";
  out << "snr_db = " << formatDouble(spec.snr_db) << "\n";
  out << "output = " << spec.output_path << "\n";
  out << "\n[scenario]\n";
  const Scenario& s = spec.scenario;
  out << "L = " << s.cells << "\n";
  out << "N = " << s.rrus_per_cell << "\n";
  out << "M = " << s.antennas_per_rru << "\n";
  out << "K = " << s.users_per_cell << "\n";
  out << "cell_radius = " << formatDouble(s.cell_radius) << "\n";
  out << "pathloss_exponent = " << formatDouble(s.pathloss_exponent) << "\n";
  out << "shadowing_sigma = " << formatDouble(s.shadowing_sigma) << "\n";
  out << "reference_distance = " << formatDouble(s.reference_distance) << "\n";
  out << "min_access_distance = " << formatDouble(s.min_access_distance) << "\n";
  out << "gamma_p = " << formatDouble(s.pilot_noise) << "\n";
  out << "gamma_ul = " << formatDouble(s.uplink_noise) << "\n";
  out << "correlation_coefficient = " << formatDouble(s.correlation_coefficient) << "\n";
  out << "rng_seed = " << s.rng_seed << "\n";
  out << "num_trials = " << s.num_trials << "\n";
  if (spec.mismatch_given) {
    const MismatchConfig& m = spec.mismatch;
    out << "\n[mismatch]\n";
    out << "theta_bs_t = " << formatDouble(m.theta_bs_t) << "\n";
    out << "theta_bs_r = " << formatDouble(m.theta_bs_r) << "\n";
    out << "theta_ue_t = " << formatDouble(m.theta_ue_t) << "\n";
    out << "theta_ue_r = " << formatDouble(m.theta_ue_r) << "\n";
    out << "delta2_bs_t = " << formatDouble(m.delta2_bs_t) << "\n";
    out << "delta2_bs_r = " << formatDouble(m.delta2_bs_r) << "\n";
    out << "delta2_ue_t = " << formatDouble(m.delta2_ue_t) << "\n";
    out << "delta2_ue_r = " << formatDouble(m.delta2_ue_r) << "\n";
  }
  if (!spec.sweep.parameter.empty()) {
    out << "\n[sweep]\n";
    out << "parameter = " << spec.sweep.parameter << "\n";
    out << "values = ";
    for (std::size_t i = 0; i < spec.sweep.values.size(); ++i) {
      out << (i == 0 ? "" : ", ") << formatDouble(spec.sweep.values[i]);
    }
    out << "\n";
  }
  return out.str();
}

std::vector<ResultRow> runExperiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  switch (spec.kind) {
    case ExperimentKind::kUplinkErgodic: runUplink(spec, false, rows); break;
    case ExperimentKind::kUplinkAsymptoticCompare: runUplink(spec, true, rows); break;
    case ExperimentKind::kDistributedVsCollocated:
      runDistributedVsCollocated(spec, rows);
      break;
    case ExperimentKind::kMismatchPhaseSweep:
    case ExperimentKind::kMismatchAmplitudeSweep: runMismatchSweep(spec, rows); break;
    case ExperimentKind::kCalibrationCheck: runCalibrationCheck(spec, rows); break;
  }
  if (!spec.output_path.empty()) {
    writeFileAtomic(spec.output_path, formatCsv(rows));
  }
  return rows;
}

std::string formatCsv(const std::vector<ResultRow>& rows) {
  std::string out = "sweep_value,metric,value,std_error,trials,seed\n";
  char buffer[96];
  for (const ResultRow& row : rows) {
    std::snprintf(buffer, sizeof buffer, "%.12g,", row.sweep_value);
    out += buffer;
    out += row.metric;
    std::snprintf(buffer, sizeof buffer, ",%.12g,%.12g,%lld,%llu\n", row.value, row.std_error,
                  static_cast<long long>(row.trials),
                  static_cast<unsigned long long>(row.seed));
    out += buffer;
  }
  return out;
}

void writeFileAtomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write to '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw ConfigError("cannot move '" + tmp.string() + "' to '" + target.string() +
                            "': " + ec.message());
}

}  // namespace lsasim
