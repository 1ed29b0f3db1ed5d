#pragma once

#include <Eigen/Dense>

namespace qft {

struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double fwhm = 0.0;       // full width at half maximum of the fitted profile
  double r_squared = 0.0;  // coefficient of determination against the data
  bool converged = false;
};

// Least-squares fit of y ~ a * exp(-4 ln2 (x - m)^2 / w^2) by damped Gauss-Newton.
GaussianFit fit_gaussian(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                         int max_iter = 200);

} // namespace qft
