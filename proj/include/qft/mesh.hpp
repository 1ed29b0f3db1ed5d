#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qft {

// Uniform temporal grid of n samples spanning `window` seconds, centered on
// t = 0, with the matching FFT-ordered angular frequency grid.
struct TemporalMesh {
  int n = 0;
  double window = 0.0;  // s
  double dt = 0.0;      // s
  Eigen::ArrayXd t;     // t_i = (i - n/2) dt
  Eigen::ArrayXd omega; // rad/s, FFT storage order

  static TemporalMesh create(int n, double window);
};

// sqrt(peak_power) * exp(-2 ln2 (t - center)^2 / fwhm^2): a pulse whose
// INTENSITY full width at half maximum is `fwhm`.
Eigen::ArrayXcd gaussian_pulse(const TemporalMesh& mesh, double peak_power,
                               double fwhm, double center = 0.0);

// integral |A|^2 dt
double pulse_energy(const TemporalMesh& mesh, const Eigen::ArrayXcd& field);

// Photon count of a watt-normalized envelope at carrier frequency omega_c:
// pulse_energy / (hbar * omega_c).
double photon_number(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                     double omega_carrier);

// Hermite-Gaussian modes, orthonormal under sum |phi|^2 dt = 1. The scale is
// set so mode 0 has amplitude FWHM equal to t_char:
//   phi_0(t) = pi^{-1/4} s^{-1/2} exp(-x^2 / 2),  x = (t - center)/s,
//   s = t_char / (2 sqrt(2 ln2)),
// with the usual recursion phi_k = sqrt(2/k) x phi_{k-1} - sqrt((k-1)/k) phi_{k-2}.
class HgBasis {
 public:
  HgBasis(const TemporalMesh& mesh, int n_modes, double t_char,
          double center = 0.0);

  int n_modes() const { return static_cast<int>(modes_.cols()); }
  double t_char() const { return t_char_; }
  double center() const { return center_; }
  Eigen::ArrayXcd mode(int k) const { return modes_.col(k).array(); }
  const Eigen::MatrixXcd& matrix() const { return modes_; }

 private:
  Eigen::MatrixXcd modes_;  // column k = mode k (real-valued, stored complex)
  double t_char_;
  double center_;
};

// c_k = sum conj(phi_k) A dt
Eigen::VectorXcd project(const TemporalMesh& mesh, const HgBasis& basis,
                         const Eigen::ArrayXcd& field);

Eigen::ArrayXcd synthesize(const HgBasis& basis, const Eigen::VectorXcd& coeffs);

// || A - synthesize(project(A)) ||^2 / || A ||^2  (energy fraction missed)
double projection_residual(const TemporalMesh& mesh, const HgBasis& basis,
                           const Eigen::ArrayXcd& field);

} // namespace qft
