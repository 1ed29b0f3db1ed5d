#include "qft/two_mode.hpp"

#include <cmath>

namespace qft {

Eigen::Matrix2cd transfer_matrix(double kappa, double delta_beta, double z) {
  using namespace std::complex_literals;
  const double k = std::sqrt(kappa * kappa + 0.25 * delta_beta * delta_beta);
  const double kz = k * z;
  const double c = std::cos(kz);
  // sin(kz)/k, continuous at k -> 0
  const double s_over_k = (std::abs(kz) < 1e-6)
                              ? z * (1.0 - kz * kz / 6.0)
                              : std::sin(kz) / k;
  const std::complex<double> half_phase = std::exp(-0.5i * delta_beta * z);
  Eigen::Matrix2cd m;
  m(0, 0) = half_phase * (c + 0.5i * delta_beta * s_over_k);
  m(0, 1) = half_phase * (1.0i * kappa * s_over_k);
  m(1, 0) = std::conj(half_phase) * (1.0i * kappa * s_over_k);
  m(1, 1) = std::conj(half_phase) * (c - 0.5i * delta_beta * s_over_k);
  return m;
}

HomState hom_output_state(const Eigen::Matrix2cd& m) {
  HomState state;
  const double sqrt2 = std::sqrt(2.0);
  state.c20 = sqrt2 * m(0, 0) * m(0, 1);
  state.c11 = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
  state.c02 = sqrt2 * m(1, 0) * m(1, 1);
  state.p20 = std::norm(state.c20);
  state.p11 = std::norm(state.c11);
  state.p02 = std::norm(state.c02);
  state.sigma = 2.0 * std::abs(m(0, 0)) * std::abs(m(0, 1));
  return state;
}

} // namespace qft
