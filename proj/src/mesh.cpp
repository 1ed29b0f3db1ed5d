#include "qft/mesh.hpp"

#include <cmath>
#include <stdexcept>

#include "qft/constants.hpp"
#include "qft/errors.hpp"

namespace qft {

TemporalMesh TemporalMesh::create(int n, double window) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("TemporalMesh: n must be a power of two >= 8");
  }
  if (!(window > 0.0)) {
    throw std::invalid_argument("TemporalMesh: window must be positive");
  }
  TemporalMesh mesh;
  mesh.n = n;
  mesh.window = window;
  mesh.dt = window / n;
  mesh.t.resize(n);
  mesh.omega.resize(n);
  const double domega = 2.0 * kPi / window;
  for (int i = 0; i < n; ++i) {
    mesh.t(i) = (i - n / 2) * mesh.dt;
    const int k = (i < n / 2) ? i : i - n;  // FFT storage order
    mesh.omega(i) = k * domega;
  }
  return mesh;
}

Eigen::ArrayXcd gaussian_pulse(const TemporalMesh& mesh, double peak_power,
                               double fwhm, double center) {
  if (!(fwhm > 0.0)) throw std::invalid_argument("gaussian_pulse: fwhm must be positive");
  if (peak_power < 0.0) throw std::invalid_argument("gaussian_pulse: negative power");
  const double k = 2.0 * std::log(2.0) / (fwhm * fwhm);
  Eigen::ArrayXd env = (-k * (mesh.t - center).square()).exp();
  return (std::sqrt(peak_power) * env).cast<std::complex<double>>();
}

double pulse_energy(const TemporalMesh& mesh, const Eigen::ArrayXcd& field) {
  return field.abs2().sum() * mesh.dt;
}

double photon_number(const TemporalMesh& mesh, const Eigen::ArrayXcd& field,
                     double omega_carrier) {
  if (!(omega_carrier > 0.0)) {
    throw std::invalid_argument("photon_number: carrier frequency must be positive");
  }
  return pulse_energy(mesh, field) / (kHBar * omega_carrier);
}

HgBasis::HgBasis(const TemporalMesh& mesh, int n_modes, double t_char,
                 double center)
    : t_char_(t_char), center_(center) {
  if (n_modes < 1) throw std::invalid_argument("HgBasis: need at least one mode");
  if (!(t_char > 0.0)) throw std::invalid_argument("HgBasis: t_char must be positive");
  const double s = t_char / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const Eigen::ArrayXd x = (mesh.t - center) / s;
  Eigen::MatrixXd real_modes(mesh.n, n_modes);
  Eigen::ArrayXd prev2, prev;
  for (int k = 0; k < n_modes; ++k) {
    Eigen::ArrayXd cur;
    if (k == 0) {
      cur = std::pow(kPi, -0.25) / std::sqrt(s) * (-0.5 * x.square()).exp();
    } else if (k == 1) {
      cur = std::sqrt(2.0) * x * prev;
    } else {
      cur = std::sqrt(2.0 / k) * x * prev - std::sqrt((k - 1.0) / k) * prev2;
    }
    real_modes.col(k) = cur.matrix();
    prev2.swap(prev);
    prev.swap(cur);
  }
  modes_ = real_modes.cast<std::complex<double>>();
}

Eigen::VectorXcd project(const TemporalMesh& mesh, const HgBasis& basis,
                         const Eigen::ArrayXcd& field) {
  return basis.matrix().adjoint() * field.matrix() * mesh.dt;
}

Eigen::ArrayXcd synthesize(const HgBasis& basis, const Eigen::VectorXcd& coeffs) {
  // Coefficient vectors restricted to a leading subspace (fewer entries than
  // the basis has modes) are synthesized with the missing amplitudes at zero.
  const Eigen::Index n = basis.matrix().cols();
  if (coeffs.size() > n) {
    throw NumericalError("synthesize: more coefficients than basis modes");
  }
  return (basis.matrix().leftCols(coeffs.size()) * coeffs).array();
}

double projection_residual(const TemporalMesh& mesh, const HgBasis& basis,
                           const Eigen::ArrayXcd& field) {
  const double total = pulse_energy(mesh, field);
  if (total <= 0.0) return 0.0;
  const Eigen::ArrayXcd rec = synthesize(basis, project(mesh, basis, field));
  return pulse_energy(mesh, field - rec) / total;
}

} // namespace qft
