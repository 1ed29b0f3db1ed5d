#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qft {

// Closed-form solution of the two-mode frequency-translation equations
//   d/dz A_g = i kappa exp(-i delta_beta z) A_b
//   d/dz A_b = i kappa exp(+i delta_beta z) A_g
// as the 2x2 map [A_g, A_b](z) = M [A_g, A_b](0). M is unitary for any
// (kappa, delta_beta, z).
Eigen::Matrix2cd transfer_matrix(double kappa, double delta_beta, double z);

// Two photons, one per band, in the same temporal mode, both transformed by
// the same unitary map M. Output state amplitudes over |2,0>, |1,1>, |0,2>.
struct HomState {
  std::complex<double> c20, c11, c02;
  double p20 = 0.0, p11 = 0.0, p02 = 0.0;
  double sigma = 0.0;  // 2 |M_gg| |M_gb|, the interference visibility scale
};

HomState hom_output_state(const Eigen::Matrix2cd& m);

} // namespace qft
