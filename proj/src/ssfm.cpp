#include "qft/ssfm.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qft/constants.hpp"
#include "qft/errors.hpp"

namespace qft {

namespace {

using Cplx = std::complex<double>;

// Co-moving dispersion phase per unit length:
//   B(omega) = sum_{n=1..order} beta_n omega^n / n! - frame_slowness * omega
Eigen::ArrayXd dispersion_phase(const TemporalMesh& mesh, const BandParams& band,
                                double frame_slowness, int order) {
  Eigen::ArrayXd phase = Eigen::ArrayXd::Zero(mesh.n);
  Eigen::ArrayXd omega_pow = Eigen::ArrayXd::Ones(mesh.n);
  double factorial = 1.0;
  const int n_max = std::min<int>(order, static_cast<int>(band.beta.size()) - 1);
  for (int n = 1; n <= n_max; ++n) {
    omega_pow *= mesh.omega;
    factorial *= n;
    phase += band.beta(n) / factorial * omega_pow;
  }
  phase -= frame_slowness * mesh.omega;
  return phase;
}

Eigen::ArrayXcd phase_factor(const Eigen::ArrayXd& phase, double dz) {
  return (Cplx(0.0, 1.0) * phase * dz).exp();
}

void apply_spectral_factor(Eigen::ArrayXcd& field, const Eigen::ArrayXcd& factor,
                           const FftEngine& engine) {
  engine.to_freq(field);
  field *= factor;
  engine.to_time(field);
}

} // namespace

InteractionSetup make_setup(const FiberSpec& fiber, const DispersionProfile& profile,
                            const CarrierSet& carriers, double power_p,
                            double power_q, int dispersion_order) {
  InteractionSetup setup;
  setup.fiber = fiber;
  setup.p = {carriers.omega_p, profile.derivatives(carriers.omega_p, dispersion_order)};
  setup.q = {carriers.omega_q, profile.derivatives(carriers.omega_q, dispersion_order)};
  setup.g = {carriers.omega_g, profile.derivatives(carriers.omega_g, dispersion_order)};
  setup.b = {carriers.omega_b, profile.derivatives(carriers.omega_b, dispersion_order)};
  setup.frame_slowness = setup.p.beta(1);
  setup.power_p = power_p;
  setup.power_q = power_q;
  setup.delta_beta0 = setup.p.beta(0) + setup.g.beta(0) - setup.q.beta(0) -
                      setup.b.beta(0) + fiber.gamma * (power_q - power_p);
  return setup;
}

double aliasing_margin_db(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                          const FftEngine& engine) {
  Eigen::ArrayXcd spectrum = field;
  engine.to_freq(spectrum);
  const Eigen::ArrayXd power = spectrum.abs2();
  const double peak = power.maxCoeff();
  if (peak <= 0.0) return -600.0;
  const double nyquist = kPi / mesh.dt;
  double band_peak = 0.0;
  for (int i = 0; i < mesh.n; ++i) {
    if (std::abs(mesh.omega(i)) >= 0.9 * nyquist) {
      band_peak = std::max(band_peak, power(i));
    }
  }
  if (band_peak <= 0.0) return -600.0;
  return 10.0 * std::log10(band_peak / peak);
}

void check_aliasing(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                    const FftEngine& engine, const char* label) {
  const double margin = aliasing_margin_db(mesh, field, engine);
  if (margin > -60.0) {
    throw NumericalError(std::string(label) +
                         ": spectral content near the grid Nyquist limit (" +
                         std::to_string(margin) +
                         " dB); increase mesh points or window");
  }
}

PumpRecord::PumpRecord(const TemporalMesh& mesh, const InteractionSetup& setup,
                       const Eigen::ArrayXcd& pump_p0, const Eigen::ArrayXcd& pump_q0,
                       const SolverConfig& config) {
  if (config.n_steps < 1) throw std::invalid_argument("PumpRecord: n_steps must be >= 1");
  n_steps_ = config.n_steps;
  dz_ = setup.fiber.length / n_steps_;
  const double hz = 0.5 * dz_;  // the record advances in half steps

  FftEngine engine(mesh.n);
  const Eigen::ArrayXcd disp_p = config.include_dispersion
      ? phase_factor(dispersion_phase(mesh, setup.p, setup.frame_slowness,
                                      config.dispersion_order), 0.5 * hz)
      : Eigen::ArrayXcd::Ones(mesh.n);
  const Eigen::ArrayXcd disp_q = config.include_dispersion
      ? phase_factor(dispersion_phase(mesh, setup.q, setup.frame_slowness,
                                      config.dispersion_order), 0.5 * hz)
      : Eigen::ArrayXcd::Ones(mesh.n);

  Eigen::ArrayXcd p = pump_p0;
  Eigen::ArrayXcd q = pump_q0;
  p_.reserve(2 * n_steps_ + 1);
  q_.reserve(2 * n_steps_ + 1);
  p_.push_back(p);
  q_.push_back(q);

  const double gamma = setup.fiber.gamma;
  const double e0 = pulse_energy(mesh, p) + pulse_energy(mesh, q);
  for (int h = 0; h < 2 * n_steps_; ++h) {
    if (config.include_dispersion) {
      apply_spectral_factor(p, disp_p, engine);
      apply_spectral_factor(q, disp_q, engine);
    }
    if (config.include_pump_nonlinearity && gamma != 0.0) {
      // SPM + mutual CPM rotate phases only, so this substep is exact.
      const Eigen::ArrayXd p2 = p.abs2();
      const Eigen::ArrayXd q2 = q.abs2();
      p *= (Cplx(0.0, 1.0) * gamma * hz * (p2 + 2.0 * q2)).exp();
      q *= (Cplx(0.0, 1.0) * gamma * hz * (q2 + 2.0 * p2)).exp();
    }
    if (config.include_dispersion) {
      apply_spectral_factor(p, disp_p, engine);
      apply_spectral_factor(q, disp_q, engine);
    }
    p_.push_back(p);
    q_.push_back(q);
  }

  if (e0 > 0.0) {
    const double e1 = pulse_energy(mesh, p) + pulse_energy(mesh, q);
    energy_drift_ = std::abs(e1 / e0 - 1.0);
    check_aliasing(mesh, p, engine, "pump p");
    check_aliasing(mesh, q, engine, "pump q");
  }
}

void propagate_signals(const TemporalMesh& mesh, const InteractionSetup& setup,
                       const PumpRecord& pumps, SignalState& state,
                       const SolverConfig& config, const StepSink* sink) {
  if (pumps.n_steps() != config.n_steps) {
    throw std::invalid_argument("propagate_signals: pump record has different step count");
  }
  const int n_steps = config.n_steps;
  const double dz = pumps.dz();
  const double gamma = setup.fiber.gamma;

  FftEngine engine(mesh.n);
  check_aliasing(mesh, state.g, engine, "signal g input");
  check_aliasing(mesh, state.b, engine, "signal b input");

  const Eigen::ArrayXcd disp_g = config.include_dispersion
      ? phase_factor(dispersion_phase(mesh, setup.g, setup.frame_slowness,
                                      config.dispersion_order), 0.5 * dz)
      : Eigen::ArrayXcd::Ones(mesh.n);
  const Eigen::ArrayXcd disp_b = config.include_dispersion
      ? phase_factor(dispersion_phase(mesh, setup.b, setup.frame_slowness,
                                      config.dispersion_order), 0.5 * dz)
      : Eigen::ArrayXcd::Ones(mesh.n);

  // d/dz [g, b] at position z with the given pump snapshot.
  Eigen::ArrayXcd cross, drive;
  auto rhs = [&](const Eigen::ArrayXcd& g, const Eigen::ArrayXcd& b,
                 const Eigen::ArrayXcd& pump_p, const Eigen::ArrayXcd& pump_q,
                 double z, Eigen::ArrayXcd& dg, Eigen::ArrayXcd& db) {
    if (config.include_cross_phase) {
      cross = Cplx(0.0, 2.0 * gamma) * (pump_p.abs2() + pump_q.abs2());
    } else {
      cross.setZero(mesh.n);
    }
    if (config.include_coupling) {
      drive = Cplx(0.0, 2.0 * gamma) * pump_p.conjugate() * pump_q *
              std::exp(Cplx(0.0, -setup.delta_beta0 * z));
      dg = cross * g + drive * b;
      db = cross * b - drive.conjugate() * g;
    } else {
      dg = cross * g;
      db = cross * b;
    }
  };

  if (sink) (*sink)(0, 0.0, state);

  Eigen::ArrayXcd k1g, k1b, k2g, k2b, k3g, k3b, k4g, k4b;
  for (int i = 0; i < n_steps; ++i) {
    const double z0 = i * dz;
    if (config.include_dispersion) {
      apply_spectral_factor(state.g, disp_g, engine);
      apply_spectral_factor(state.b, disp_b, engine);
    }

    const Eigen::ArrayXcd& p0 = pumps.p_at(2 * i);
    const Eigen::ArrayXcd& q0 = pumps.q_at(2 * i);
    const Eigen::ArrayXcd& pm = pumps.p_at(2 * i + 1);
    const Eigen::ArrayXcd& qm = pumps.q_at(2 * i + 1);
    const Eigen::ArrayXcd& p1 = pumps.p_at(2 * i + 2);
    const Eigen::ArrayXcd& q1 = pumps.q_at(2 * i + 2);

    rhs(state.g, state.b, p0, q0, z0, k1g, k1b);
    rhs(state.g + 0.5 * dz * k1g, state.b + 0.5 * dz * k1b, pm, qm, z0 + 0.5 * dz,
        k2g, k2b);
    rhs(state.g + 0.5 * dz * k2g, state.b + 0.5 * dz * k2b, pm, qm, z0 + 0.5 * dz,
        k3g, k3b);
    rhs(state.g + dz * k3g, state.b + dz * k3b, p1, q1, z0 + dz, k4g, k4b);
    state.g += dz / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    state.b += dz / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);

    if (config.include_dispersion) {
      apply_spectral_factor(state.g, disp_g, engine);
      apply_spectral_factor(state.b, disp_b, engine);
    }

    const int step = i + 1;
    if (sink && (step == n_steps || step % std::max(1, config.store_every) == 0)) {
      (*sink)(step, step * dz, state);
    }
  }

  check_aliasing(mesh, state.g, engine, "signal g output");
  check_aliasing(mesh, state.b, engine, "signal b output");
}

} // namespace qft
