#include "qft/analytic.hpp"

#include <cmath>

#include "qft/constants.hpp"

namespace qft {

namespace {

using Cplx = std::complex<double>;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double mismatch(const AnalyticParams& p, double omega_g, double omega_b) {
  return p.beta1 * (omega_g + omega_b) +
         0.5 * p.beta2 * (omega_g * omega_g - omega_b * omega_b);
}

} // namespace

double coupling_spectrum(const AnalyticParams& params, double omega) {
  const double s = params.sigma;
  return params.gamma * params.p0 * s * std::sqrt(2.0 / kPi) *
         std::exp(-0.5 * s * s * omega * omega);
}

std::complex<double> integrated_kernel(const AnalyticParams& params,
                                       double omega_g, double omega_b,
                                       bool gaussian_approx) {
  const double half_dl = 0.5 * mismatch(params, omega_g, omega_b) * params.length;
  const double envelope = gaussian_approx
                              ? std::exp(-0.5 * kSincGaussC * half_dl * half_dl)
                              : sinc(half_dl);
  return coupling_spectrum(params, omega_g - omega_b) * params.length *
         std::exp(Cplx(0.0, -half_dl)) * envelope;
}

MehlerDecomposition mehler_decomposition(const AnalyticParams& params, int n_modes) {
  MehlerDecomposition dec;
  dec.beta = std::sqrt(kSincGaussC) * std::abs(params.beta1) * params.length / 2.0;
  dec.mu = (params.sigma - dec.beta) / (params.sigma + dec.beta);
  dec.t0 = std::sqrt(2.0 * dec.beta * params.sigma);
  dec.lambda.resize(n_modes);
  const double lambda0 = params.gamma * params.p0 * params.length *
                         std::sqrt((params.sigma / dec.beta) * (1.0 - dec.mu * dec.mu));
  for (int n = 0; n < n_modes; ++n) {
    dec.lambda(n) = lambda0 * std::pow(std::abs(dec.mu), n);
  }
  return dec;
}

Eigen::ArrayXd hermite_function(int n, const Eigen::ArrayXd& x) {
  Eigen::ArrayXd prev2, prev;
  Eigen::ArrayXd cur = std::pow(kPi, -0.25) * (-0.5 * x.square()).exp();
  for (int k = 1; k <= n; ++k) {
    prev2.swap(prev);
    prev.swap(cur);
    cur = std::sqrt(2.0 / k) * x * prev;
    if (k >= 2) cur -= std::sqrt((k - 1.0) / k) * prev2;
  }
  return cur;
}

Eigen::ArrayXd spectral_mode(const MehlerDecomposition& mehler, int n,
                             const Eigen::ArrayXd& omega) {
  return std::sqrt(mehler.t0) * hermite_function(n, mehler.t0 * omega);
}

Eigen::ArrayXcd analytic_mode(const MehlerDecomposition& mehler,
                              const AnalyticParams& params, ModeFamily family,
                              int n, const Eigen::ArrayXd& omega) {
  // Temporal centers (this library's convention: spectral e^{+i omega d}
  // delays by d). With d0 = -beta1 L / 2:
  //   input green +d0, input blue -d0, output green -d0, output blue +d0.
  const double d0 = -0.5 * params.beta1 * params.length;
  double delay = 0.0;
  switch (family) {
    case ModeFamily::input_green: delay = d0; break;
    case ModeFamily::input_blue: delay = -d0; break;
    case ModeFamily::output_green: delay = -d0; break;
    case ModeFamily::output_blue: delay = d0; break;
  }
  const Eigen::ArrayXd mag = spectral_mode(mehler, n, omega);
  return mag * (Cplx(0.0, 1.0) * delay * omega).exp();
}

Eigen::ArrayXcd analytic_mode_time(const TemporalMesh& mesh,
                                   const MehlerDecomposition& mehler,
                                   const AnalyticParams& params, ModeFamily family,
                                   int n, double extra_delay) {
  Eigen::ArrayXcd spec = analytic_mode(mehler, params, family, n, mesh.omega);
  spec *= (Cplx(0.0, 1.0) * extra_delay * mesh.omega).exp();
  // The inverse transform places t = 0 at index 0; the mesh puts it at the
  // center. Delaying by half a window is a sign flip on odd bins (n is even).
  for (int k = 1; k < mesh.n; k += 2) spec(k) = -spec(k);
  FftEngine engine(mesh.n);
  engine.to_time(spec);
  const double norm = std::sqrt(pulse_energy(mesh, spec));
  if (norm > 0.0) spec /= norm;
  return spec;
}

double mode_fidelity(const TemporalMesh& mesh, const Eigen::ArrayXcd& a,
                     const Eigen::ArrayXcd& b) {
  const double na = std::sqrt(pulse_energy(mesh, a));
  const double nb = std::sqrt(pulse_energy(mesh, b));
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  const Cplx overlap = (a.conjugate() * b).sum() * mesh.dt;
  return std::abs(overlap) / (na * nb);
}

} // namespace qft
