#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reslab/errors.hpp"
#include "reslab/geometry.hpp"
#include "reslab/hamiltonian.hpp"
#include "reslab/modulation.hpp"

namespace reslab {

// Invalid or malformed experiment configuration (CLI exit code 2).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct DiluteSpec {
  double base_radius = 1.0;
  std::vector<Vec3> centers;  // rescaled centers z_j
  double eta = 0.1;
};

struct NumericsConfig {
  int refinement = 2;
  std::vector<int> refinement_sweep{0, 1, 2, 3};
  double tol = 1e-9;
  double det_tol = 1e-8;
  double max_raw_asymmetry = 5e-2;
  int grid = 2048;
  double transform_tol = 1e-10;
  std::vector<double> epsilon_sweep{1e-2, 5e-3, 2.5e-3};
  std::vector<double> eta_sweep{0.2, 0.1, 0.05};
  bool bem_capB = true;  // capB from the boundary element solver (else 4 pi R)
};

struct ExperimentConfig {
  std::vector<Sphere> spheres;  // explicit geometry, empty when `dilute` is set
  std::optional<DiluteSpec> dilute;
  Materials materials;
  std::optional<ModulationProfile> modulation;
  NumericsConfig numerics;
  std::optional<std::vector<std::pair<int, int>>> adjacency;

  // Spheres for the explicit geometry, or the dilute system at `eta`.
  ResonatorSystem system() const;
  ResonatorSystem system_at(double eta) const;
  std::size_t resonators() const;
};

// Parses JSON text. Malformed JSON is reported with line and column; unknown
// keys and non-positive physical constants are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Human-readable description of the accepted keys.
std::string config_schema();

}  // namespace reslab
