#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qft/fft.hpp"
#include "qft/fiber.hpp"
#include "qft/mesh.hpp"

namespace qft {

// One frequency band: carrier and the local wavenumber expansion
// beta[0..n] (value and derivatives at the carrier).
struct BandParams {
  double omega_c = 0.0;
  Eigen::ArrayXd beta;
};

// Everything the propagator needs about the four interacting bands.
// Units: pump envelopes carry sqrt(W); signal envelopes are
// photon-flux-proportional (their absolute scale cancels in the linear
// signal equations, and energy ratios between the two signal bands are
// photon-number ratios).
struct InteractionSetup {
  FiberSpec fiber;
  BandParams p, q, g, b;          // pumps p, q and signals g (higher), b (lower... see note)
  double frame_slowness = 0.0;    // beta1 of pump p: the co-moving frame
  double delta_beta0 = 0.0;       // carrier wavenumber mismatch
                                  //   beta_p + beta_g - beta_q - beta_b + gamma (Pq - Pp)
  double power_p = 0.0;           // pump peak powers entering delta_beta0, W
  double power_q = 0.0;
};

InteractionSetup make_setup(const FiberSpec& fiber, const DispersionProfile& profile,
                            const CarrierSet& carriers, double power_p,
                            double power_q, int dispersion_order = 4);

struct SolverConfig {
  int n_steps = 400;
  int store_every = 1;             // stride (in steps) of snapshot callbacks
  int dispersion_order = 4;        // highest beta derivative applied
  bool include_dispersion = true;
  bool include_pump_nonlinearity = true;  // pump SPM + pump-pump CPM
  bool include_cross_phase = true;        // pump-induced phase on signals
  bool include_coupling = true;           // band-exchange drive
};

// Power within 10% of the Nyquist frequency relative to the spectral peak,
// in dB. Large negative values mean the grid resolves the field.
double aliasing_margin_db(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                          const FftEngine& engine);

// Throws NumericalError when the margin exceeds -60 dB.
void check_aliasing(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                    const FftEngine& engine, const char* label);

// Pump fields pre-propagated alone (dispersion + SPM + mutual CPM; the
// undepleted-pump approximation drops any back-action from the signals).
// Fields are stored at every half step of the signal grid, so the signal
// stepper reads exact pump snapshots at step edges and midpoints.
class PumpRecord {
 public:
  PumpRecord(const TemporalMesh& mesh, const InteractionSetup& setup,
             const Eigen::ArrayXcd& pump_p0, const Eigen::ArrayXcd& pump_q0,
             const SolverConfig& config);

  int n_steps() const { return n_steps_; }
  double dz() const { return dz_; }
  // half-step index 0 .. 2 n_steps, at z = index * dz / 2
  const Eigen::ArrayXcd& p_at(int half_index) const { return p_.at(half_index); }
  const Eigen::ArrayXcd& q_at(int half_index) const { return q_.at(half_index); }
  double energy_drift() const { return energy_drift_; }

 private:
  std::vector<Eigen::ArrayXcd> p_, q_;
  int n_steps_ = 0;
  double dz_ = 0.0;
  double energy_drift_ = 0.0;
};

struct SignalState {
  Eigen::ArrayXcd g, b;
};

using StepSink = std::function<void(int step, double z, const SignalState&)>;

// Coupled linear propagation of the two signal envelopes through the stored
// pump fields: per band  d/dz A = i B(omega) A + 2 i gamma (|Ap|^2+|Aq|^2) A
// plus the exchange drive 2 i gamma conj(Ap) Aq exp(-i delta_beta0 z) acting
// g <- b (and its negative conjugate acting b <- g). Strang splitting with a
// classical RK4 substep for the z-dependent coupled nonlinear part.
// The sink, when given, fires at step 0, every store_every-th step, and the
// final step.
void propagate_signals(const TemporalMesh& mesh, const InteractionSetup& setup,
                       const PumpRecord& pumps, SignalState& state,
                       const SolverConfig& config,
                       const StepSink* sink = nullptr);

} // namespace qft
