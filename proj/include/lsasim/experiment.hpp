#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsasim/config.hpp"
#include "lsasim/reciprocity.hpp"
#include "lsasim/scenario.hpp"

namespace lsasim {

enum class ExperimentKind {
  kUplinkErgodic,
  kUplinkAsymptoticCompare,
  kDistributedVsCollocated,
  kMismatchPhaseSweep,
  kMismatchAmplitudeSweep,
  kCalibrationCheck,
};

const char* toString(ExperimentKind kind);
ExperimentKind experimentKindFromString(const std::string& name);  // throws ConfigError

struct SweepSpec {
  std::string parameter;  // must belong to the kind's allowed set
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

// The sweep parameters a kind accepts; empty means the kind takes no sweep.
const std::vector<std::string>& allowedSweepParameters(ExperimentKind kind);

// A fully described experiment: what to run, over which scenario, swept how,
// and where the CSV goes. parseExperimentSpec fills documented defaults
// (including a per-kind default sweep) and validates everything.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kUplinkErgodic;
  Scenario scenario;
  MismatchConfig mismatch;
  bool mismatch_given = false;  // whether the config carried a [mismatch] section
  double snr_db = 10.0;         // downlink transmit SNR for the reciprocity kinds
  SweepSpec sweep;
  std::string output_path = "results.csv";  // empty string = do not write a file

  bool operator==(const ExperimentSpec&) const = default;

  void validate() const;  // throws ConfigError
};

ExperimentSpec parseExperimentSpec(const std::string& text,
                                   const std::string& origin = "<config>");
ExperimentSpec loadExperimentSpec(const std::string& path);

// Canonical config text: parseExperimentSpec(serializeExperimentSpec(s)) == s.
std::string serializeExperimentSpec(const ExperimentSpec& spec);

struct ResultRow {
  double sweep_value = 0.0;  // sweep point; drop index; -1 for summary rows
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;  // zero for analytic metrics
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// Runs the experiment, writes the CSV atomically to spec.output_path (unless
// empty) and returns every row. (config, seed) fully determines the rows.
std::vector<ResultRow> runExperiment(const ExperimentSpec& spec);

// Fixed header plus one line per row, 12 significant digits.
std::string formatCsv(const std::vector<ResultRow>& rows);

// Writes content to path via a temp file in the same directory + rename.
void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace lsasim
