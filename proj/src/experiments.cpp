#include "qft/experiments.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <ostream>
#include <vector>

#include "qft/analytic.hpp"
#include "qft/constants.hpp"
#include "qft/csv.hpp"
#include "qft/errors.hpp"
#include "qft/green.hpp"
#include "qft/interference.hpp"

namespace qft {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) { return format_double(v); }

double to_nm(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega * 1e9;
}

void write_manifest(const fs::path& dir, const Manifest& manifest) {
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  for (const auto& [key, value] : manifest) out << key << " = " << value << "\n";
}

Eigen::ArrayXcd unit_energy_gaussian(const TemporalMesh& mesh, double fwhm,
                                     double center = 0.0) {
  Eigen::ArrayXcd a = gaussian_pulse(mesh, 1.0, fwhm, center);
  return a / std::sqrt(pulse_energy(mesh, a));
}

// The Green-matrix pipeline shared by the green, schmidt, hom, and analytic
// experiments: pump record, basis timescale, full and restricted matrices,
// Schmidt structure.
struct Pipeline {
  ResolvedCase rc;
  PumpRecord pumps;
  TimescaleResult timescale;
  HgBasis basis;
  GreenMatrix green;
  GreenMatrix valid;
  SchmidtDecomposition schmidt;
};

Pipeline build_pipeline(const CaseConfig& cfg, int jobs, std::ostream& log) {
  ResolvedCase rc = resolve_case(cfg);
  Eigen::ArrayXcd p0 = gaussian_pulse(rc.mesh, cfg.power_p, cfg.pump_fwhm, 0.0);
  Eigen::ArrayXcd q0 =
      gaussian_pulse(rc.mesh, cfg.power_q, cfg.pump_fwhm, cfg.pump_delay);
  PumpRecord pumps(rc.mesh, rc.setup, p0, q0, cfg.solver);
  log << "pump record ready, energy drift " << fmt(pumps.energy_drift()) << "\n";

  TimescaleResult ts;
  if (cfg.auto_t_char) {
    ts = optimal_timescale(rc.mesh, rc.setup, pumps, cfg.n_modes,
                           cfg.initial_t_char, cfg.basis_center, cfg.solver, jobs);
    log << "basis timescale " << fmt(ts.t_char * 1e12) << " ps ("
        << ts.iterations << " refinements, r^2 " << fmt(ts.r_squared) << ")\n";
  } else {
    ts.t_char = cfg.t_char;
    ts.converged = true;
    ts.r_squared = 1.0;
  }

  HgBasis basis(rc.mesh, cfg.n_modes, ts.t_char, cfg.basis_center);
  GreenMatrix green = compute_green(rc.mesh, rc.setup, pumps, basis, cfg.solver, jobs);
  GreenMatrix valid = valid_submatrix(green);
  log << "green matrix: unitarity residual " << fmt(unitarity_max_residual(green))
      << " full, " << fmt(unitarity_max_residual(valid)) << " on the leading "
      << valid.n_inputs << " modes\n";
  SchmidtDecomposition schmidt = schmidt_decompose(valid);

  return Pipeline{std::move(rc),    std::move(pumps), ts,
                  std::move(basis), std::move(green), std::move(valid),
                  std::move(schmidt)};
}

Eigen::VectorXcd pad_coeffs(const Eigen::VectorXcd& v, int n) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  out.head(v.size()) = v;
  return out;
}

void fill_case_manifest(const ResolvedCase& rc, Manifest& m) {
  m["wavelength_g_nm"] = fmt(to_nm(rc.carriers.omega_g));
  m["wavelength_b_nm"] = fmt(to_nm(rc.carriers.omega_b));
  m["delta_beta0_per_m"] = fmt(rc.setup.delta_beta0);
  m["window_ps"] = fmt(rc.mesh.window * 1e12);
  m["mesh_points"] = std::to_string(rc.mesh.n);
}

void fill_green_manifest(const Pipeline& pl, Manifest& m) {
  fill_case_manifest(pl.rc, m);
  m["t_char_ps"] = fmt(pl.timescale.t_char * 1e12);
  m["t_char_iterations"] = std::to_string(pl.timescale.iterations);
  m["t_char_converged"] = pl.timescale.converged ? "1" : "0";
  m["t_char_r_squared"] = fmt(pl.timescale.r_squared);
  m["n_modes"] = std::to_string(pl.green.n_outputs);
  m["valid_dim"] = std::to_string(pl.valid.n_inputs);
  m["unitarity_max_full"] = fmt(unitarity_max_residual(pl.green));
  m["unitarity_max_valid"] = fmt(unitarity_max_residual(pl.valid));
  m["pump_energy_drift"] = fmt(pl.pumps.energy_drift());
}

void write_block_csv(const fs::path& file, const Eigen::MatrixXcd& mat) {
  CsvWriter csv(file, {"row", "col", "re", "im"});
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      csv.row({static_cast<double>(r), static_cast<double>(c), mat(r, c).real(),
               mat(r, c).imag()});
    }
  }
}

void write_modes_csv(const fs::path& file, const Eigen::MatrixXcd& modes) {
  CsvWriter csv(file, {"schmidt_index", "hg_index", "re", "im"});
  for (Eigen::Index n = 0; n < modes.cols(); ++n) {
    for (Eigen::Index k = 0; k < modes.rows(); ++k) {
      csv.row({static_cast<double>(n), static_cast<double>(k),
               modes(k, n).real(), modes(k, n).imag()});
    }
  }
}

void write_green_outputs(const Pipeline& pl, const fs::path& dir) {
  write_block_csv(dir / "green_gg.csv", pl.green.gg);
  write_block_csv(dir / "green_gb.csv", pl.green.gb);
  write_block_csv(dir / "green_bg.csv", pl.green.bg);
  write_block_csv(dir / "green_bb.csv", pl.green.bb);
  Eigen::ArrayXd dev = unitarity_row_deviation(pl.green);
  CsvWriter csv(dir / "unitarity.csv", {"input_index", "row_deviation"});
  for (Eigen::Index i = 0; i < dev.size(); ++i) {
    csv.row({static_cast<double>(i), dev(i)});
  }
}

Manifest run_dispersion(const CaseConfig& cfg, const fs::path& dir,
                        std::ostream& log) {
  ResolvedCase rc = resolve_case(cfg);
  {
    CsvWriter csv(dir / "dispersion_curve.csv", {"wavelength_nm", "D_ps_nm_km"});
    const int n = 201;
    for (int i = 0; i < n; ++i) {
      double lambda = 600e-9 + (1000e-9 * i) / (n - 1);
      // s/m^2 to the conventional ps/(nm km)
      csv.row({lambda * 1e9, dispersion_parameter(rc.profile, lambda) * 1e6});
    }
  }
  Manifest m;
  fill_case_manifest(rc, m);
  double zdw = zero_dispersion_wavelength(rc.profile, 640e-9, 840e-9);
  m["zdw_nm"] = fmt(zdw * 1e9);
  m["velocity_p_m_s"] = fmt(group_velocity(rc.profile, rc.carriers.omega_p));
  m["velocity_q_m_s"] = fmt(group_velocity(rc.profile, rc.carriers.omega_q));
  m["velocity_g_m_s"] = fmt(group_velocity(rc.profile, rc.carriers.omega_g));
  m["velocity_b_m_s"] = fmt(group_velocity(rc.profile, rc.carriers.omega_b));
  m["beta2_p_s2_m"] = fmt(rc.profile.derivative(rc.carriers.omega_p, 2));
  m["beta2_q_s2_m"] = fmt(rc.profile.derivative(rc.carriers.omega_q, 2));
  m["beta2_g_s2_m"] = fmt(rc.profile.derivative(rc.carriers.omega_g, 2));
  m["beta2_b_s2_m"] = fmt(rc.profile.derivative(rc.carriers.omega_b, 2));
  log << "zero-dispersion wavelength " << fmt(zdw * 1e9) << " nm\n";
  return m;
}

Manifest run_phasematch(const CaseConfig& cfg, const fs::path& dir,
                        std::ostream& log) {
  ResolvedCase rc = resolve_case(cfg);
  PhaseMatchingCurve curve = phase_matching_curve(
      rc.profile, rc.carriers, cfg.fiber.gamma, cfg.power_p, cfg.power_q,
      cfg.fiber.length, 1.5e12, 601);
  {
    CsvWriter csv(dir / "phase_matching.csv", {"detuning_Trad_s", "pm_sinc"});
    for (Eigen::Index i = 0; i < curve.detuning.size(); ++i) {
      csv.row({curve.detuning(i) * 1e-12, curve.efficiency(i)});
    }
  }
  Manifest m;
  fill_case_manifest(rc, m);
  m["pm_fwhm_Trad_s"] = fmt(curve.fwhm * 1e-12);
  log << "phase-matching acceptance " << fmt(curve.fwhm * 1e-12) << " Trad/s\n";
  return m;
}

Manifest run_propagate(const CaseConfig& cfg, const fs::path& dir,
                       std::ostream& log) {
  if (cfg.probe_fwhm <= 0.0) {
    throw ConfigError("the propagate experiment requires a 'probe' section");
  }
  ResolvedCase rc = resolve_case(cfg);
  Eigen::ArrayXcd p0 = gaussian_pulse(rc.mesh, cfg.power_p, cfg.pump_fwhm, 0.0);
  Eigen::ArrayXcd q0 =
      gaussian_pulse(rc.mesh, cfg.power_q, cfg.pump_fwhm, cfg.pump_delay);
  PumpRecord pumps(rc.mesh, rc.setup, p0, q0, cfg.solver);

  SignalState state{unit_energy_gaussian(rc.mesh, cfg.probe_fwhm),
                    Eigen::ArrayXcd::Zero(rc.mesh.n)};
  CsvWriter csv(dir / "evolution.csv", {"z_m", "energy_g", "energy_b", "efficiency"});
  double eff_final = 0.0, eff_max = 0.0, z_at_max = 0.0, sum_drift = 0.0;
  StepSink sink = [&](int, double z, const SignalState& s) {
    double eg = pulse_energy(rc.mesh, s.g);
    double eb = pulse_energy(rc.mesh, s.b);
    csv.row({z, eg, eb, eb});
    eff_final = eb;
    if (eb > eff_max) {
      eff_max = eb;
      z_at_max = z;
    }
    sum_drift = std::max(sum_drift, std::abs(eg + eb - 1.0));
  };
  propagate_signals(rc.mesh, rc.setup, pumps, state, cfg.solver, &sink);

  Manifest m;
  fill_case_manifest(rc, m);
  m["probe_fwhm_ps"] = fmt(cfg.probe_fwhm * 1e12);
  m["efficiency_final"] = fmt(eff_final);
  m["efficiency_max"] = fmt(eff_max);
  m["z_at_max_m"] = fmt(z_at_max);
  m["energy_sum_drift_max"] = fmt(sum_drift);
  m["pump_energy_drift"] = fmt(pumps.energy_drift());
  log << "translated fraction " << fmt(eff_final) << " at the fiber end\n";
  return m;
}

Manifest run_green(const CaseConfig& cfg, const fs::path& dir, int jobs,
                   std::ostream& log) {
  Pipeline pl = build_pipeline(cfg, jobs, log);
  write_green_outputs(pl, dir);
  Manifest m;
  fill_green_manifest(pl, m);
  return m;
}

void write_schmidt_outputs(const Pipeline& pl, const fs::path& dir) {
  const SchmidtDecomposition& sd = pl.schmidt;
  const int r = static_cast<int>(sd.rho.size());
  {
    CsvWriter csv(dir / "singular_values.csv",
                  {"schmidt_index", "rho_sq", "tau_sq", "sigma_hom"});
    for (int n = 0; n < r; ++n) {
      csv.row({static_cast<double>(n), sd.rho(n) * sd.rho(n),
               sd.tau(n) * sd.tau(n), sd.sigma(n)});
    }
  }
  write_modes_csv(dir / "modes_input_green.csv", sd.input_green);
  write_modes_csv(dir / "modes_input_blue.csv", sd.input_blue);
  write_modes_csv(dir / "modes_output_green.csv", sd.output_green);
  write_modes_csv(dir / "modes_output_blue.csv", sd.output_blue);
  {
    const int nm = pl.basis.n_modes();
    Eigen::ArrayXcd vin = synthesize(pl.basis, pad_coeffs(sd.input_green.col(0), nm));
    Eigen::ArrayXcd win = synthesize(pl.basis, pad_coeffs(sd.input_blue.col(0), nm));
    Eigen::ArrayXcd vout = synthesize(pl.basis, pad_coeffs(sd.output_green.col(0), nm));
    Eigen::ArrayXcd wout = synthesize(pl.basis, pad_coeffs(sd.output_blue.col(0), nm));
    CsvWriter csv(dir / "leading_modes_time.csv",
                  {"t_ps", "abs_input_green", "abs_input_blue",
                   "abs_output_green", "abs_output_blue"});
    for (int i = 0; i < pl.rc.mesh.n; ++i) {
      csv.row({pl.rc.mesh.t(i) * 1e12, std::abs(vin(i)), std::abs(win(i)),
               std::abs(vout(i)), std::abs(wout(i))});
    }
  }
}

void fill_schmidt_manifest(const Pipeline& pl, Manifest& m) {
  fill_green_manifest(pl, m);
  const SchmidtDecomposition& sd = pl.schmidt;
  const int r = static_cast<int>(sd.rho.size());
  int above90 = 0;
  for (int n = 0; n < r; ++n) {
    if (sd.rho(n) * sd.rho(n) > 0.9) ++above90;
  }
  m["n_schmidt"] = std::to_string(r);
  m["n_conversion_above_0p9"] = std::to_string(above90);
  if (r > 0) {
    m["rho0_sq"] = fmt(sd.rho(0) * sd.rho(0));
    m["tau0_sq"] = fmt(sd.tau(0) * sd.tau(0));
    m["sigma0"] = fmt(sd.sigma(0));
  }
}

Manifest run_schmidt(const CaseConfig& cfg, const fs::path& dir, int jobs,
                     std::ostream& log) {
  Pipeline pl = build_pipeline(cfg, jobs, log);
  write_green_outputs(pl, dir);
  write_schmidt_outputs(pl, dir);

  const int n_curves = std::min<int>(3, static_cast<int>(pl.schmidt.rho.size()));
  EfficiencyCurves curves = efficiency_vs_length(pl.rc.mesh, pl.rc.setup, pl.pumps,
                                                 pl.basis, pl.schmidt, n_curves,
                                                 cfg.solver);
  std::vector<std::string> cols{"z_m"};
  for (int k = 0; k < n_curves; ++k) {
    cols.push_back("efficiency_mode" + std::to_string(k + 1));
  }
  CsvWriter csv(dir / "efficiency_vs_length.csv", cols);
  for (Eigen::Index i = 0; i < curves.z.size(); ++i) {
    std::vector<double> row{curves.z(i)};
    for (int k = 0; k < n_curves; ++k) row.push_back(curves.efficiency(i, k));
    csv.row(row);
  }

  Manifest m;
  fill_schmidt_manifest(pl, m);
  log << "leading conversion rho^2 " << fmt(pl.schmidt.rho(0) * pl.schmidt.rho(0))
      << "\n";
  return m;
}

Manifest run_hom(const CaseConfig& cfg, const fs::path& dir, int jobs,
                 std::ostream& log) {
  Pipeline pl = build_pipeline(cfg, jobs, log);
  const SchmidtDecomposition& sd = pl.schmidt;
  const int nm = pl.basis.n_modes();
  Eigen::ArrayXcd input_green =
      synthesize(pl.basis, pad_coeffs(sd.input_green.col(0), nm));
  Eigen::ArrayXcd input_blue =
      synthesize(pl.basis, pad_coeffs(sd.input_blue.col(0), nm));

  HomCurve curve = p11_vs_length(pl.rc.mesh, pl.rc.setup, pl.pumps, input_green,
                                 input_blue, cfg.solver);
  {
    CsvWriter csv(dir / "p11_vs_length.csv", {"z_m", "p11"});
    for (Eigen::Index i = 0; i < curve.z.size(); ++i) {
      csv.row({curve.z(i), curve.p11(i)});
    }
  }
  {
    CsvWriter csv(dir / "sigma.csv", {"schmidt_index", "sigma_hom"});
    for (Eigen::Index n = 0; n < sd.rho.size(); ++n) {
      csv.row({static_cast<double>(n), sd.sigma(static_cast<int>(n))});
    }
  }

  OutputComponents comps = output_components(pl.rc.mesh, pl.rc.setup, pl.pumps,
                                             input_green, input_blue, cfg.solver);
  double p11 = coincidence_probability(pl.rc.mesh, comps);
  BunchingProbabilities bunch = bunching_probabilities(pl.rc.mesh, comps);
  Eigen::Index imin = 0;
  double p11_min = curve.p11.minCoeff(&imin);

  Manifest m;
  fill_schmidt_manifest(pl, m);
  double rho0 = sd.rho(0), tau0 = sd.tau(0);
  m["p11_final"] = fmt(p11);
  m["p11_predicted"] = fmt((tau0 * tau0 - rho0 * rho0) * (tau0 * tau0 - rho0 * rho0));
  m["p20"] = fmt(bunch.p20);
  m["p02"] = fmt(bunch.p02);
  m["prob_sum"] = fmt(p11 + bunch.p20 + bunch.p02);
  m["p11_min"] = fmt(p11_min);
  m["z_at_p11_min_m"] = fmt(curve.z(imin));
  log << "coincidence probability " << fmt(p11) << " at the fiber end, minimum "
      << fmt(p11_min) << " at " << fmt(curve.z(imin)) << " m\n";
  return m;
}

Manifest run_analytic(const CaseConfig& cfg, const fs::path& dir, int jobs,
                      std::ostream& log) {
  Pipeline pl = build_pipeline(cfg, jobs, log);

  AnalyticParams params;
  params.gamma = cfg.fiber.gamma;
  params.p0 = std::sqrt(cfg.power_p * cfg.power_q);
  params.length = cfg.fiber.length;
  params.sigma = cfg.pump_fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  params.beta1 = 0.5 * (pl.rc.setup.g.beta(1) - pl.rc.setup.b.beta(1));
  params.beta2 = 0.0;
  MehlerDecomposition mehler = mehler_decomposition(params, cfg.n_modes);

  {
    CsvWriter csv(dir / "lambda.csv", {"schmidt_index", "lambda"});
    for (Eigen::Index n = 0; n < mehler.lambda.size(); ++n) {
      csv.row({static_cast<double>(n), mehler.lambda(n)});
    }
  }

  const int nm = pl.basis.n_modes();
  Eigen::ArrayXcd v0_numeric =
      synthesize(pl.basis, pad_coeffs(pl.schmidt.input_green.col(0), nm));
  Eigen::ArrayXcd v0_analytic = analytic_mode_time(
      pl.rc.mesh, mehler, params, ModeFamily::input_green, 0);
  double fidelity = mode_fidelity(pl.rc.mesh, v0_numeric, v0_analytic);

  const Eigen::ArrayXd& rho = pl.schmidt.rho;
  double ratio_sum = 0.0;
  int ratio_count = 0;
  for (int n = 0; n + 1 < rho.size() && n < 8; ++n) {
    if (rho(n) > 1e-6) {
      ratio_sum += rho(n + 1) / rho(n);
      ++ratio_count;
    }
  }
  double t_char_analytic = mehler.t0 * 2.0 * std::sqrt(2.0 * std::log(2.0));

  Manifest m;
  fill_schmidt_manifest(pl, m);
  m["sigma_ps"] = fmt(params.sigma * 1e12);
  m["beta_ps"] = fmt(mehler.beta * 1e12);
  m["mu"] = fmt(mehler.mu);
  m["t0_ps"] = fmt(mehler.t0 * 1e12);
  m["lambda0"] = fmt(mehler.lambda(0));
  m["gamma_p0_L"] = fmt(params.gamma * params.p0 * params.length);
  m["t_char_analytic_ps"] = fmt(t_char_analytic * 1e12);
  m["t_char_ratio"] = fmt(pl.timescale.t_char / t_char_analytic);
  m["fidelity_mode0"] = fmt(fidelity);
  m["rho0"] = fmt(rho(0));
  if (ratio_count > 0) m["rho_ratio_mean"] = fmt(ratio_sum / ratio_count);
  log << "leading-mode fidelity " << fmt(fidelity) << " against the closed form\n";
  return m;
}

Manifest run_sweep(const CaseConfig& cfg, const fs::path& dir, std::ostream& log) {
  if (!cfg.has_sweep) {
    throw ConfigError("the sweep experiment requires a 'sweep' section");
  }
  ResolvedCase rc = resolve_case(cfg);
  Eigen::ArrayXcd p0 = gaussian_pulse(rc.mesh, cfg.power_p, cfg.pump_fwhm, 0.0);
  Eigen::ArrayXcd q0 =
      gaussian_pulse(rc.mesh, cfg.power_q, cfg.pump_fwhm, cfg.pump_delay);
  PumpRecord pumps(rc.mesh, rc.setup, p0, q0, cfg.solver);

  const bool eff = cfg.sweep.quantity == "max_efficiency";
  CsvWriter csv(dir / "sweep.csv",
                {"signal_fwhm_ps", eff ? "max_efficiency" : "min_p11",
                 eff ? "z_at_max_m" : "z_at_min_m"});
  int failures = 0;
  for (int i = 0; i < cfg.sweep.n_points; ++i) {
    double w = cfg.sweep.fwhm_min + (cfg.sweep.fwhm_max - cfg.sweep.fwhm_min) *
                                        (i / (cfg.sweep.n_points - 1.0));
    Eigen::ArrayXcd probe = unit_energy_gaussian(rc.mesh, w);
    try {
      double best_v = 0.0, best_z = 0.0;
      if (eff) {
        best_v = -1.0;
        SignalState state{probe, Eigen::ArrayXcd::Zero(rc.mesh.n)};
        StepSink sink = [&](int, double z, const SignalState& s) {
          double eb = pulse_energy(rc.mesh, s.b);
          if (eb > best_v) {
            best_v = eb;
            best_z = z;
          }
        };
        propagate_signals(rc.mesh, rc.setup, pumps, state, cfg.solver, &sink);
      } else {
        HomCurve curve = p11_vs_length(rc.mesh, rc.setup, pumps, probe, probe,
                                       cfg.solver);
        Eigen::Index imin = 0;
        best_v = curve.p11.minCoeff(&imin);
        best_z = curve.z(imin);
      }
      csv.row({w * 1e12, best_v, best_z});
    } catch (const NumericalError& e) {
      ++failures;
      log << "sweep point " << fmt(w * 1e12) << " ps skipped: " << e.what() << "\n";
    }
  }

  Manifest m;
  fill_case_manifest(rc, m);
  m["quantity"] = cfg.sweep.quantity;
  m["n_points"] = std::to_string(cfg.sweep.n_points);
  m["n_failures"] = std::to_string(failures);
  m["pump_energy_drift"] = fmt(pumps.energy_drift());
  return m;
}

} // namespace

Manifest run_experiment(const CaseConfig& config, const fs::path& out_dir,
                        int jobs, std::ostream& log) {
  if (config.experiment.empty()) {
    throw ConfigError("no experiment selected");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  std::filesystem::create_directories(out_dir);

  Manifest m;
  const std::string& kind = config.experiment;
  if (kind == "dispersion") {
    m = run_dispersion(config, out_dir, log);
  } else if (kind == "phasematch") {
    m = run_phasematch(config, out_dir, log);
  } else if (kind == "propagate") {
    m = run_propagate(config, out_dir, log);
  } else if (kind == "green") {
    m = run_green(config, out_dir, jobs, log);
  } else if (kind == "schmidt") {
    m = run_schmidt(config, out_dir, jobs, log);
  } else if (kind == "hom") {
    m = run_hom(config, out_dir, jobs, log);
  } else if (kind == "analytic") {
    m = run_analytic(config, out_dir, jobs, log);
  } else if (kind == "sweep") {
    m = run_sweep(config, out_dir, log);
  } else {
    throw ConfigError("unknown experiment kind '" + kind + "'");
  }

  m["experiment"] = kind;
  m["config"] = config.canonical_json();
  m["format_version"] = "1";
  write_manifest(out_dir, m);
  return m;
}

} // namespace qft
