#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsasim/experiment.hpp"
#include "lsasim/numerics.hpp"
#include "lsasim/reciprocity.hpp"

// Exit codes: 0 success, 2 configuration error (bad CLI arguments or config
// file), 3 numerical failure during the run.
int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for multi-cell large-scale antenna systems"};
  std::string config_path;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string output;
  app.add_option("config", config_path, "Experiment config file")->required();
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Override the config's rng_seed");
  CLI::Option* trials_opt = app.add_option("--trials", trials, "Override num_trials")
                                ->check(CLI::PositiveNumber);
  CLI::Option* output_opt =
      app.add_option("--output", output, "Override the CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    lsasim::ExperimentSpec spec = lsasim::loadExperimentSpec(config_path);
    if (seed_opt->count() > 0) spec.scenario.rng_seed = seed;
    if (trials_opt->count() > 0) spec.scenario.num_trials = trials;
    if (output_opt->count() > 0) spec.output_path = output;
    spec.validate();

    const std::vector<lsasim::ResultRow> rows = lsasim::runExperiment(spec);

    if (lsasim::psdRepairCount() > 0) {
      std::cerr << "warning: " << lsasim::psdRepairCount()
                << " covariance log-det evaluation(s) needed an eigenvalue clamp\n";
    }
    if (lsasim::lossClampCount() > 0) {
      std::cerr << "warning: " << lsasim::lossClampCount()
                << " normalized-loss value(s) clamped into [0, 1]\n";
    }
    if (!spec.output_path.empty()) {
      std::printf("wrote %s (%zu rows)\n", spec.output_path.c_str(), rows.size());
    }
    return 0;
  } catch (const lsasim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lsasim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
