#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qft/config.hpp"
#include "qft/errors.hpp"
#include "qft/experiments.hpp"

namespace {

const std::string kKinds =
    "dispersion, phasematch, propagate, green, schmidt, hom, analytic, sweep";

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qftbs: quantum frequency translation by Bragg-scattering four-wave "
      "mixing in fiber"};

  std::string experiment;
  std::string config_path;
  std::string out_root = "runs";
  int jobs = 1;
  int steps_override = 0;
  int modes_override = 0;
  int mesh_override = 0;

  app.add_option("experiment", experiment, "What to compute (" + kKinds + ")")
      ->required();
  app.add_option("-c,--config", config_path, "Case configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_root,
                 "Output root; results land in <out>/<experiment>");
  app.add_option("-j,--jobs", jobs, "Worker threads for per-mode propagation")
      ->check(CLI::PositiveNumber);
  app.add_option("--steps", steps_override, "Override solver.n_steps")
      ->check(CLI::PositiveNumber);
  app.add_option("--modes", modes_override, "Override basis.n_modes")
      ->check(CLI::PositiveNumber);
  app.add_option("--mesh", mesh_override, "Override mesh.n_points")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    qft::CaseConfig config = qft::CaseConfig::from_json_file(config_path);
    if (!config.experiment.empty() && config.experiment != experiment) {
      throw qft::ConfigError("config file names experiment '" +
                             config.experiment + "' but '" + experiment +
                             "' was requested");
    }
    config.experiment = experiment;
    if (steps_override > 0) config.solver.n_steps = steps_override;
    if (modes_override > 0) config.n_modes = modes_override;
    if (mesh_override > 0) {
      if (mesh_override < 256 || (mesh_override & (mesh_override - 1)) != 0) {
        throw qft::ConfigError("--mesh must be a power of two >= 256");
      }
      config.n_points = mesh_override;
    }

    std::filesystem::path out_dir = std::filesystem::path(out_root) / experiment;
    qft::run_experiment(config, out_dir, jobs, std::cout);
    std::cout << "wrote " << out_dir.string() << "\n";
    return 0;
  } catch (const qft::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qft::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
