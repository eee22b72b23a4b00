#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "reslab/config.hpp"

namespace reslab {

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool sweep_refinement = false;
  bool dilute = false;
  bool export_mesh = false;
  bool epsilon_sweep = false;
  bool plot_script = false;
};

// Each command writes CSV files into options.out_dir, prints a short summary
// to `log` and returns the written file names in order. InputError (including
// ConfigError) maps to CLI exit code 2, NumericalError to 3.
std::vector<std::string> cmd_capmat(const ExperimentConfig& cfg, const CommandOptions& options,
                                    std::ostream& log);
std::vector<std::string> cmd_floquet(const ExperimentConfig& cfg, const CommandOptions& options,
                                     std::ostream& log);
std::vector<std::string> cmd_hamiltonian(const ExperimentConfig& cfg,
                                         const CommandOptions& options, std::ostream& log);
std::vector<std::string> cmd_tightbinding(const ExperimentConfig& cfg,
                                          const CommandOptions& options, std::ostream& log);

}  // namespace reslab
