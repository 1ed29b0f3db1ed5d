#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qft {

// Air-silica microstructured fiber, modeled as a step-index strand: a silica
// core of radius core_radius inside a uniform cladding whose index is the
// air-fill-weighted mix of air and silica.
struct FiberSpec {
  double core_radius = 0.0;  // m
  double air_fill = 0.0;     // cladding air fill fraction in [0, 1)
  double gamma = 0.0;        // nonlinear coefficient, 1/(W m)
  double length = 0.0;       // m
};

// Fused-silica refractive index (Sellmeier), wavelength in meters,
// valid roughly 0.21 um to 6.7 um.
double silica_index(double wavelength);

// n_clad = f * 1 + (1 - f) * n_core
double cladding_index(double n_core, double air_fill);

struct GuidedMode {
  double beta = 0.0;      // propagation constant, rad/m
  double u = 0.0;         // core transverse parameter
  double w = 0.0;         // cladding decay parameter
  double v_number = 0.0;
  double n_core = 0.0;
  double n_clad = 0.0;
};

// Exact characteristic equation of the fundamental (HE11-type) vector mode of
// the step-index strand. Throws NumericalError if no guided root is found.
GuidedMode solve_fundamental_mode(const FiberSpec& fiber, double wavelength);

// beta(omega) over a wavelength range, backed either by the mode solver or by
// an arbitrary callable (for synthetic tests). Derivatives are
// Richardson-extrapolated central finite differences with relative step
// rel_step (base step h = rel_step * omega).
class DispersionProfile {
 public:
  DispersionProfile(const FiberSpec& fiber, double lambda_min, double lambda_max);
  DispersionProfile(std::function<double(double)> beta_of_omega,
                    double omega_min, double omega_max);

  double beta(double omega) const;
  // orders 0..n_max (n_max <= 4); index i of the result is the i-th derivative
  Eigen::ArrayXd derivatives(double omega0, int n_max = 4) const;
  double derivative(double omega0, int order) const;

  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }

 private:
  std::function<double(double)> beta_fn_;
  double omega_min_, omega_max_;
  double rel_step_ = 2e-4;
};

// D = -(2 pi c / lambda^2) * beta2, in s/m^2
double dispersion_parameter(const DispersionProfile& profile, double wavelength);

// 1 / beta1, m/s
double group_velocity(const DispersionProfile& profile, double omega);

// Root of beta2 between the two wavelengths. Throws NumericalError if the
// sign does not change on the interval.
double zero_dispersion_wavelength(const DispersionProfile& profile,
                                  double lambda_lo, double lambda_hi);

// The four carrier frequencies of the translation process. Energy
// conservation requires omega_p + omega_g = omega_q + omega_b.
struct CarrierSet {
  double omega_p = 0.0;
  double omega_q = 0.0;
  double omega_g = 0.0;
  double omega_b = 0.0;
};

// Wavenumber mismatch for both signals co-detuned by `detuning` (which keeps
// energy conservation intact):
//   beta(w_p) + beta(w_g + d) - beta(w_q) - beta(w_b + d) + gamma (Pq - Pp)
double phase_mismatch(const DispersionProfile& profile, const CarrierSet& carriers,
                      double gamma, double power_p, double power_q,
                      double detuning);

struct PhaseMatchingCurve {
  Eigen::ArrayXd detuning;    // rad/s
  Eigen::ArrayXd efficiency;  // sinc(mismatch L / 2): 1 at the matched point,
                              // negative in the sidelobes
  double fwhm = 0.0;          // of the central lobe, rad/s
};

PhaseMatchingCurve phase_matching_curve(const DispersionProfile& profile,
                                        const CarrierSet& carriers, double gamma,
                                        double power_p, double power_q,
                                        double length, double detuning_halfwidth,
                                        int n_points);

// Shift both signal carriers (preserving energy conservation) until the
// linear wavenumber mismatch vanishes. The seed fixes which root is selected.
CarrierSet tune_signal_carriers(const DispersionProfile& profile, double omega_p,
                                double omega_q, double omega_g_seed,
                                double search_halfwidth = 1.5e12);

} // namespace qft
