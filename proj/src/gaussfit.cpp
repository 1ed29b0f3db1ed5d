#include "qft/gaussfit.hpp"

#include <cmath>

namespace qft {

namespace {

Eigen::ArrayXd model(const Eigen::ArrayXd& x, double a, double m, double w) {
  const double k = 4.0 * std::log(2.0) / (w * w);
  return a * (-k * (x - m).square()).exp();
}

} // namespace

GaussianFit fit_gaussian(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                         int max_iter) {
  GaussianFit fit;
  const Eigen::Index n = x.size();
  if (n < 4 || y.size() != n) return fit;

  // Moment-based initial guess, treating max(y, 0) as a density.
  Eigen::Index imax = 0;
  double a = y.maxCoeff(&imax);
  if (!(a > 0.0)) return fit;
  const Eigen::ArrayXd yp = y.cwiseMax(0.0);
  const double mass = yp.sum();
  double m = (yp * x).sum() / mass;
  double var = (yp * (x - m).square()).sum() / mass;
  // For a Gaussian amplitude profile the density-weighted std s relates to the
  // FWHM by w = 2 sqrt(2 ln2) s.
  double w = 2.0 * std::sqrt(2.0 * std::log(2.0) * std::max(var, 0.0));
  if (!(w > 0.0)) w = std::abs(x(n - 1) - x(0)) / 4.0;

  double lambda = 1e-3;
  Eigen::ArrayXd r = y - model(x, a, m, w);
  double cost = r.square().sum();
  bool ok = false;
  for (int it = 0; it < max_iter; ++it) {
    const double k = 4.0 * std::log(2.0) / (w * w);
    const Eigen::ArrayXd g = (-k * (x - m).square()).exp();
    Eigen::MatrixXd J(n, 3);
    J.col(0) = g.matrix();
    J.col(1) = (a * g * 2.0 * k * (x - m)).matrix();
    J.col(2) = (a * g * 2.0 * k * (x - m).square() / w).matrix();

    const Eigen::Matrix3d JtJ = J.transpose() * J;
    const Eigen::Vector3d Jtr = J.transpose() * r.matrix();
    Eigen::Matrix3d A = JtJ;
    A.diagonal() += lambda * JtJ.diagonal();
    const Eigen::Vector3d step = A.ldlt().solve(Jtr);

    const double a2 = a + step(0);
    const double m2 = m + step(1);
    const double w2 = w + step(2);
    if (!(w2 > 0.0) || !std::isfinite(a2) || !std::isfinite(m2) || !std::isfinite(w2)) {
      lambda *= 10.0;
      if (lambda > 1e12) break;
      continue;
    }
    const Eigen::ArrayXd r2 = y - model(x, a2, m2, w2);
    const double cost2 = r2.square().sum();
    if (cost2 < cost) {
      const double rel = (cost - cost2) / std::max(cost, 1e-300);
      a = a2; m = m2; w = w2; r = r2; cost = cost2;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (rel < 1e-12) { ok = true; break; }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) { ok = true; break; }
    }
  }

  const double mean = y.mean();
  const double ss_tot = (y - mean).square().sum();
  fit.amplitude = a;
  fit.center = m;
  fit.fwhm = std::abs(w);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - cost / ss_tot : 0.0;
  fit.converged = ok && std::isfinite(fit.r_squared);
  return fit;
}

} // namespace qft
