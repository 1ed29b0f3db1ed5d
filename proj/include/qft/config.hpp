#pragma once

#include <filesystem>
#include <string>

#include "qft/fiber.hpp"
#include "qft/mesh.hpp"
#include "qft/ssfm.hpp"

namespace qft {

struct SweepSpec {
  std::string quantity;  // "max_efficiency" or "min_p11"
  double fwhm_min = 0.0; // s
  double fwhm_max = 0.0; // s
  int n_points = 25;
};

// Parsed and validated run configuration, SI units throughout. Unknown JSON
// keys, wrong types, and out-of-range values all raise ConfigError.
struct CaseConfig {
  std::string experiment;  // may be empty; the CLI positional takes precedence

  FiberSpec fiber;

  double pump_p_wavelength = 0.0;  // m
  double pump_q_wavelength = 0.0;  // m
  double pump_fwhm = 0.0;          // s, intensity FWHM (both pumps)
  double pump_delay = 0.0;         // s, pump q relative to pump p
  double power_p = 0.0;            // W
  double power_q = 0.0;            // W

  bool auto_g = true;              // phase-matched search seeded at seed_g
  bool auto_b = true;              // energy conservation
  double wavelength_g = 0.0;       // m, used when !auto_g
  double wavelength_b = 0.0;       // m, used when !auto_b
  double seed_g = 673e-9;          // m

  int n_points = 4096;
  bool auto_window = true;
  double window = 0.0;             // s, used when !auto_window

  int n_modes = 25;
  bool auto_t_char = true;
  double t_char = 0.0;             // s, used when !auto_t_char
  double initial_t_char = 40e-12;  // s, seed of the fit-and-recompute loop
  double basis_center = 0.0;       // s

  SolverConfig solver;

  double probe_fwhm = 0.0;         // s, Gaussian probe width (propagate / hom)

  bool has_sweep = false;
  SweepSpec sweep;

  static CaseConfig from_json_file(const std::filesystem::path& path);
  static CaseConfig from_json_string(const std::string& text);

  // Canonical single-line JSON echo of the effective configuration.
  std::string canonical_json() const;
};

// Everything derived from a CaseConfig that experiments share: the fiber
// dispersion profile, tuned carriers, band expansion, and the mesh.
struct ResolvedCase {
  CaseConfig config;
  DispersionProfile profile;
  CarrierSet carriers;
  InteractionSetup setup;
  TemporalMesh mesh;
};

ResolvedCase resolve_case(const CaseConfig& config);

} // namespace qft
