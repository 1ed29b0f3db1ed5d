#include "qft/rootfind.hpp"

#include <cmath>
#include <stdexcept>

namespace qft {

double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol, double rtol, int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw std::invalid_argument("find_root: endpoints do not bracket a root");
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * rtol * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    } else {
      d = m; e = m;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

std::optional<std::pair<double, double>> bracket_root(
    const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 2) return std::nullopt;
  double x0 = a;
  double f0 = f(x0);
  for (int i = 1; i < n; ++i) {
    const double x1 = a + (b - a) * static_cast<double>(i) / (n - 1);
    const double f1 = f(x1);
    if (f0 == 0.0) return std::make_pair(x0, x0);
    if ((f0 > 0.0) != (f1 > 0.0)) return std::make_pair(x0, x1);
    x0 = x1; f0 = f1;
  }
  return std::nullopt;
}

} // namespace qft
