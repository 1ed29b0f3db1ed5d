#pragma once

#include <Eigen/Dense>

#include "qft/mesh.hpp"
#include "qft/ssfm.hpp"

namespace qft {

// Two-band Green matrix over a Hermite-Gaussian basis, stored in the
// backward-kernel convention: rows index INPUT basis modes, columns index
// OUTPUT basis modes, i.e. G = M^dagger blockwise where M is the forward
// coefficient map out = M in over the stacked [g; b] vector. For a lossless
// process G (like M) is unitary on the subspace the basis resolves.
struct GreenMatrix {
  Eigen::MatrixXcd gg, gb, bg, bb;  // each n_inputs x n_outputs
  int n_inputs = 0;                 // rows kept (== n_outputs before restriction)
  int n_outputs = 0;                // basis size per band
  double t_char = 0.0;
  double center = 0.0;
};

// Propagates every basis mode of each band and projects the outputs.
// Deterministic for a fixed configuration regardless of `jobs`.
GreenMatrix compute_green(const TemporalMesh& mesh, const InteractionSetup& setup,
                          const PumpRecord& pumps, const HgBasis& basis,
                          const SolverConfig& config, int jobs = 1);

// Row-wise deviation of G G^dagger from the identity over the stacked
// [g; b] input index: entry i is max_j |(G G^H)_ij - delta_ij|.
Eigen::ArrayXd unitarity_row_deviation(const GreenMatrix& green);
double unitarity_max_residual(const GreenMatrix& green);

// Largest leading set of input modes (the same count in both bands) whose
// rows all pass the tolerance; returns G restricted to those input rows.
GreenMatrix valid_submatrix(const GreenMatrix& green, double tol = 1e-2);

// Schmidt structure of the translation: SVD(-G_gb) fixes the input-green
// modes V_n, the output-blue modes w_n and the conversion amplitudes rho_n;
// the surviving-green modes follow from the diagonal blocks,
// tau_n upsilon_n := G_gg^H V_n, and the input-blue modes from
// W_n = (G_bg upsilon_n + G_bb w_n) / (rho_n + tau_n). Columns are ordered by
// descending rho and phase-fixed (largest |V_n| entry real positive), so the
// decomposition is reproducible bit for bit.
struct SchmidtDecomposition {
  Eigen::ArrayXd rho, tau;        // rho^2 + tau^2 = 1 per mode (on the valid subspace)
  Eigen::MatrixXcd input_green;   // V_n   (n_inputs x r)
  Eigen::MatrixXcd input_blue;    // W_n   (n_inputs x r)
  Eigen::MatrixXcd output_green;  // upsilon_n (n_outputs x r)
  Eigen::MatrixXcd output_blue;   // w_n   (n_outputs x r)

  double sigma(int n) const { return 2.0 * rho(n) * tau(n); }
};

SchmidtDecomposition schmidt_decompose(const GreenMatrix& green);

// Fit-and-recompute iteration for the basis timescale: decompose, fit a
// Gaussian to |V_0(t)|, adopt the fitted width, repeat until the width is
// stable to rel_tol or max_iter is reached. r_squared below 0.8 marks a
// non-Gaussian leading mode (reported, not thrown).
struct TimescaleResult {
  double t_char = 0.0;
  int iterations = 0;
  bool converged = false;
  double r_squared = 0.0;
};

TimescaleResult optimal_timescale(const TemporalMesh& mesh,
                                  const InteractionSetup& setup,
                                  const PumpRecord& pumps, int n_modes,
                                  double initial_t_char, double center,
                                  const SolverConfig& config, int jobs = 1,
                                  double rel_tol = 0.05, int max_iter = 5);

// Conversion efficiency E_b(z) / E_g(0) along the fiber for the first
// n_curves Schmidt input modes V_n.
struct EfficiencyCurves {
  Eigen::ArrayXd z;            // sampled positions, m
  Eigen::MatrixXd efficiency;  // n_z x n_curves
};

EfficiencyCurves efficiency_vs_length(const TemporalMesh& mesh,
                                      const InteractionSetup& setup,
                                      const PumpRecord& pumps, const HgBasis& basis,
                                      const SchmidtDecomposition& schmidt,
                                      int n_curves, const SolverConfig& config);

} // namespace qft
