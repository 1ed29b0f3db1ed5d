#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qft/fft.hpp"
#include "qft/mesh.hpp"

namespace qft {

// Closed-form low-conversion model of the translation kernel, valid in the
// frame moving at the average signal group speed, for identical Gaussian
// pumps with negligible walk-off: A_p A_q = p0 exp(-t^2 / (2 sigma^2)).
struct AnalyticParams {
  double gamma = 0.0;   // 1/(W m)
  double p0 = 0.0;      // peak of the pump product, W
  double length = 0.0;  // m
  double sigma = 0.0;   // pump-product width parameter, s (Gaussian fwhm_pump / (2 sqrt(2 ln2)))
  double beta1 = 0.0;   // half the signal group-slowness splitting, s/m
  double beta2 = 0.0;   // common signal GVD, s^2/m (exact kernel only)
};

// Gaussian stand-in for sinc: sinc(x) ~ exp(-c x^2 / 2).
inline constexpr double kSincGaussC = 0.3858;

// gamma-bar(omega) = gamma p0 sigma sqrt(2/pi) exp(-sigma^2 omega^2 / 2);
// integrates to 2 gamma p0.
double coupling_spectrum(const AnalyticParams& params, double omega);

// First-order z-integrated conversion kernel. With
// delta = beta1 (w_g + w_b) + beta2 (w_g^2 - w_b^2) / 2:
//   K = gamma-bar(w_g - w_b) L exp(-i delta L / 2) sinc(delta L / 2),
// or with the sinc replaced by its Gaussian stand-in (and beta2 dropped)
// when gaussian_approx is set.
std::complex<double> integrated_kernel(const AnalyticParams& params,
                                       double omega_g, double omega_b,
                                       bool gaussian_approx);

// Closed-form Schmidt structure of the Gaussian-approximated kernel:
//   beta = sqrt(c) |beta1| L / 2,   mu = (sigma - beta) / (sigma + beta),
//   t0 = sqrt(2 beta sigma),        lambda_n = gamma p0 L sqrt((sigma/beta)(1 - mu^2)) |mu|^n.
struct MehlerDecomposition {
  double beta = 0.0;
  double mu = 0.0;
  double t0 = 0.0;
  Eigen::ArrayXd lambda;
};

MehlerDecomposition mehler_decomposition(const AnalyticParams& params, int n_modes);

// Orthonormal Hermite-Gaussian functions psi_n on a dimensionless grid.
Eigen::ArrayXd hermite_function(int n, const Eigen::ArrayXd& x);

// phi_n(omega) = sqrt(t0) psi_n(t0 omega), unit norm in d omega.
Eigen::ArrayXd spectral_mode(const MehlerDecomposition& mehler, int n,
                             const Eigen::ArrayXd& omega);

enum class ModeFamily { input_green, input_blue, output_green, output_blue };

// Schmidt-mode spectral functions including the family delay phases, written
// in this library's transform convention (spectral exp(+i omega d) = delay d):
// the green input is delayed by -beta1 L / 2 and the blue input advanced by
// the same amount (beta1 < 0 here), centering their collision mid-fiber;
// output families carry the opposite shifts. Frame note: these live in the
// average-signal-speed frame; compare output families against pump-frame
// numerics with an extra delay of (mean signal slowness - frame slowness) L.
Eigen::ArrayXcd analytic_mode(const MehlerDecomposition& mehler,
                              const AnalyticParams& params, ModeFamily family,
                              int n, const Eigen::ArrayXd& omega);

// Time-domain analytic mode on the mesh, unit norm, optionally shifted by
// extra_delay (used for the frame correction above).
Eigen::ArrayXcd analytic_mode_time(const TemporalMesh& mesh,
                                   const MehlerDecomposition& mehler,
                                   const AnalyticParams& params, ModeFamily family,
                                   int n, double extra_delay = 0.0);

// |<a, b>| / (||a|| ||b||)
double mode_fidelity(const TemporalMesh& mesh, const Eigen::ArrayXcd& a,
                     const Eigen::ArrayXcd& b);

} // namespace qft
