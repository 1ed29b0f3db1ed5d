#include "qft/green.hpp"

#include <cmath>
#include <complex>

#include "qft/errors.hpp"
#include "qft/gaussfit.hpp"
#include "qft/workpool.hpp"

namespace qft {

namespace {

Eigen::MatrixXcd stack_blocks(const GreenMatrix& g) {
  Eigen::MatrixXcd full(2 * g.n_inputs, 2 * g.n_outputs);
  full.topLeftCorner(g.n_inputs, g.n_outputs) = g.gg;
  full.topRightCorner(g.n_inputs, g.n_outputs) = g.gb;
  full.bottomLeftCorner(g.n_inputs, g.n_outputs) = g.bg;
  full.bottomRightCorner(g.n_inputs, g.n_outputs) = g.bb;
  return full;
}

} // namespace

GreenMatrix compute_green(const TemporalMesh& mesh, const InteractionSetup& setup,
                          const PumpRecord& pumps, const HgBasis& basis,
                          const SolverConfig& config, int jobs) {
  const int n = basis.n_modes();
  // Forward map first: column j is the stacked output coefficient vector of
  // basis input j (green inputs 0..n-1, blue inputs n..2n-1).
  Eigen::MatrixXcd m_gg(n, n), m_gb(n, n), m_bg(n, n), m_bb(n, n);

  parallel_for(jobs, 2 * n, [&](int j) {
    const bool green_input = j < n;
    const int k = green_input ? j : j - n;
    SignalState state;
    state.g = green_input ? basis.mode(k) : Eigen::ArrayXcd::Zero(mesh.n);
    state.b = green_input ? Eigen::ArrayXcd::Zero(mesh.n) : basis.mode(k);
    propagate_signals(mesh, setup, pumps, state, config);
    const Eigen::VectorXcd cg = project(mesh, basis, state.g);
    const Eigen::VectorXcd cb = project(mesh, basis, state.b);
    if (green_input) {
      m_gg.col(k) = cg;
      m_bg.col(k) = cb;
    } else {
      m_gb.col(k) = cg;
      m_bb.col(k) = cb;
    }
  });

  GreenMatrix green;
  green.n_inputs = n;
  green.n_outputs = n;
  green.t_char = basis.t_char();
  green.center = basis.center();
  green.gg = m_gg.adjoint();
  green.gb = m_bg.adjoint();
  green.bg = m_gb.adjoint();
  green.bb = m_bb.adjoint();
  return green;
}

Eigen::ArrayXd unitarity_row_deviation(const GreenMatrix& green) {
  const Eigen::MatrixXcd full = stack_blocks(green);
  Eigen::MatrixXcd p = full * full.adjoint();
  p.diagonal().array() -= 1.0;
  return p.cwiseAbs().rowwise().maxCoeff().array();
}

double unitarity_max_residual(const GreenMatrix& green) {
  return unitarity_row_deviation(green).maxCoeff();
}

GreenMatrix valid_submatrix(const GreenMatrix& green, double tol) {
  const Eigen::ArrayXd dev = unitarity_row_deviation(green);
  const int n = green.n_inputs;
  int m = 0;
  while (m < n && dev(m) < tol && dev(n + m) < tol) ++m;
  GreenMatrix sub = green;
  sub.n_inputs = m;
  sub.gg = green.gg.topRows(m);
  sub.gb = green.gb.topRows(m);
  sub.bg = green.bg.topRows(m);
  sub.bb = green.bb.topRows(m);
  return sub;
}

SchmidtDecomposition schmidt_decompose(const GreenMatrix& green) {
  if (green.n_inputs < 1) {
    throw NumericalError("schmidt_decompose: empty valid subspace");
  }
  const Eigen::MatrixXcd target = -green.gb;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(target,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXcd v_in = svd.matrixU();   // input-green columns
  Eigen::MatrixXcd w_out = svd.matrixV();  // output-blue columns
  const int r = static_cast<int>(svd.singularValues().size());

  SchmidtDecomposition dec;
  dec.rho = svd.singularValues().array();
  dec.tau.resize(r);
  dec.input_green.resize(green.n_inputs, r);
  dec.input_blue.resize(green.n_inputs, r);
  dec.output_green.resize(green.n_outputs, r);
  dec.output_blue.resize(green.n_outputs, r);

  for (int k = 0; k < r; ++k) {
    // Common-phase gauge: rotate the pair so the largest entry of V_k is
    // real positive (the SVD only fixes the pair up to a joint phase).
    Eigen::Index imax = 0;
    v_in.col(k).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> pivot = v_in(imax, k);
    if (std::abs(pivot) > 0.0) {
      const std::complex<double> rot = std::conj(pivot) / std::abs(pivot);
      v_in.col(k) *= rot;
      w_out.col(k) *= rot;
    }

    const Eigen::VectorXcd v = v_in.col(k);
    const Eigen::VectorXcd w = w_out.col(k);
    Eigen::VectorXcd upsilon = green.gg.adjoint() * v;
    const double tau = upsilon.norm();
    if (tau > 1e-14) upsilon /= tau;
    Eigen::VectorXcd w_in = green.bg * upsilon + green.bb * w;
    const double denom = dec.rho(k) + tau;
    if (denom > 1e-14) w_in /= denom;
    const double w_in_norm = w_in.norm();
    if (w_in_norm > 1e-14) w_in /= w_in_norm;

    dec.tau(k) = tau;
    dec.input_green.col(k) = v;
    dec.output_blue.col(k) = w;
    dec.output_green.col(k) = upsilon;
    dec.input_blue.col(k) = w_in;
  }
  return dec;
}

TimescaleResult optimal_timescale(const TemporalMesh& mesh,
                                  const InteractionSetup& setup,
                                  const PumpRecord& pumps, int n_modes,
                                  double initial_t_char, double center,
                                  const SolverConfig& config, int jobs,
                                  double rel_tol, int max_iter) {
  TimescaleResult result;
  double t_char = initial_t_char;
  for (int it = 1; it <= max_iter; ++it) {
    result.iterations = it;
    const HgBasis basis(mesh, n_modes, t_char, center);
    const GreenMatrix green = compute_green(mesh, setup, pumps, basis, config, jobs);
    const SchmidtDecomposition dec = schmidt_decompose(green);
    const Eigen::ArrayXd profile =
        synthesize(basis, dec.input_green.col(0)).abs();
    const GaussianFit fit = fit_gaussian(mesh.t, profile);
    result.r_squared = fit.r_squared;
    result.t_char = fit.fwhm;
    if (!(fit.fwhm > 0.0) || fit.r_squared < 0.8) {
      result.converged = false;
      return result;
    }
    if (std::abs(fit.fwhm - t_char) <= rel_tol * t_char) {
      result.converged = true;
      return result;
    }
    t_char = fit.fwhm;
  }
  result.converged = false;
  return result;
}

EfficiencyCurves efficiency_vs_length(const TemporalMesh& mesh,
                                      const InteractionSetup& setup,
                                      const PumpRecord& pumps, const HgBasis& basis,
                                      const SchmidtDecomposition& schmidt,
                                      int n_curves, const SolverConfig& config) {
  n_curves = std::min<int>(n_curves, static_cast<int>(schmidt.rho.size()));
  EfficiencyCurves curves;
  std::vector<double> z_samples;
  std::vector<std::vector<double>> eff(n_curves);
  for (int n = 0; n < n_curves; ++n) {
    SignalState state;
    state.g = synthesize(basis, schmidt.input_green.col(n));
    state.b = Eigen::ArrayXcd::Zero(mesh.n);
    const double e0 = pulse_energy(mesh, state.g);
    const StepSink sink = [&](int, double z, const SignalState& s) {
      if (n == 0) z_samples.push_back(z);
      eff[n].push_back(pulse_energy(mesh, s.b) / e0);
    };
    propagate_signals(mesh, setup, pumps, state, config, &sink);
  }
  const int n_z = static_cast<int>(z_samples.size());
  curves.z = Eigen::Map<const Eigen::ArrayXd>(z_samples.data(), n_z);
  curves.efficiency.resize(n_z, n_curves);
  for (int n = 0; n < n_curves; ++n) {
    curves.efficiency.col(n) =
        Eigen::Map<const Eigen::VectorXd>(eff[n].data(), n_z);
  }
  return curves;
}

} // namespace qft
