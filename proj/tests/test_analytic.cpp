#include <doctest.h>

#include <cmath>
#include <complex>

#include "qft/analytic.hpp"
#include "qft/constants.hpp"
#include "qft/mesh.hpp"

using namespace qft;
using std::complex;

namespace {

AnalyticParams long_pump_params() {
  AnalyticParams p;
  p.gamma = 0.1;
  p.p0 = 0.4;
  p.length = 20.0;
  p.sigma = 1000e-12 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  p.beta1 = -6.79e-13;
  return p;
}

double centroid(const TemporalMesh& mesh, const Eigen::ArrayXcd& field) {
  Eigen::ArrayXd w = field.abs2();
  return (mesh.t * w).sum() / w.sum();
}

} // namespace

TEST_CASE("coupling spectrum: peak, symmetry, and area") {
  AnalyticParams p = long_pump_params();
  const double peak = coupling_spectrum(p, 0.0);
  CHECK(peak / (p.gamma * p.p0 * p.sigma * std::sqrt(2.0 / kPi)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coupling_spectrum(p, 3e9) / coupling_spectrum(p, -3e9) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coupling_spectrum(p, 1.0 / p.sigma) / (peak * std::exp(-0.5)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  double area = 0.0;
  const double dw = 2e7;
  for (double w = -4e10; w <= 4e10; w += dw) area += coupling_spectrum(p, w) * dw;
  CHECK(area == doctest::Approx(2.0 * p.gamma * p.p0).epsilon(1e-4));
}

TEST_CASE("integrated kernel: phase-matched value and Gaussian stand-in") {
  AnalyticParams p = long_pump_params();

  // on the delta = 0 line the kernel is real, positive, and exact == approx
  complex<double> exact = integrated_kernel(p, 1e9, -1e9, false);
  complex<double> approx = integrated_kernel(p, 1e9, -1e9, true);
  CHECK(std::abs(exact.imag()) < 1e-12 * std::abs(exact));
  CHECK(exact.real() > 0.0);
  CHECK(std::abs(exact - approx) < 1e-12 * std::abs(exact));
  CHECK(std::abs(exact) / (coupling_spectrum(p, 2e9) * p.length) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // off the line both forms share the oscillatory phase exp(-i delta L / 2)
  const double wg = 2e10, wb = 1.5e10;
  const double delta = p.beta1 * (wg + wb);
  exact = integrated_kernel(p, wg, wb, false);
  approx = integrated_kernel(p, wg, wb, true);
  const double phase = -delta * p.length / 2.0;
  CHECK(std::abs(std::arg(exact * std::polar(1.0, -phase))) < 1e-9);
  CHECK(std::abs(std::arg(approx * std::polar(1.0, -phase))) < 1e-9);

  // the stand-in tracks the exact magnitude through the central lobe;
  // equal frequencies keep the spectral factor at its peak while the
  // mismatch argument delta L / 2 sweeps through x
  for (double x : {0.3, 0.8, 1.2}) {
    const double w_each = x / (std::abs(p.beta1) * p.length);
    const double m_exact = std::abs(integrated_kernel(p, w_each, w_each, false));
    const double m_approx = std::abs(integrated_kernel(p, w_each, w_each, true));
    CHECK(m_approx / m_exact == doctest::Approx(1.0).epsilon(0.06));
    CHECK(m_exact / (coupling_spectrum(p, 0.0) * p.length) ==
          doctest::Approx(std::abs(std::sin(x) / x)).epsilon(1e-9));
  }
}

TEST_CASE("mode ladder: geometric ratio and the matched-width limit") {
  AnalyticParams p = long_pump_params();
  MehlerDecomposition mehler = mehler_decomposition(p, 12);

  const double beta_expected =
      std::sqrt(kSincGaussC) * std::abs(p.beta1) * p.length / 2.0;
  CHECK(mehler.beta / beta_expected == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mehler.mu == doctest::Approx((p.sigma - mehler.beta) /
                                     (p.sigma + mehler.beta))
                         .epsilon(1e-14));
  CHECK(mehler.t0 / std::sqrt(2.0 * mehler.beta * p.sigma) ==
        doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(mehler.lambda.size() == 12);
  for (int n = 0; n + 1 < 12; ++n) {
    CHECK(mehler.lambda(n + 1) / mehler.lambda(n) ==
          doctest::Approx(mehler.mu).epsilon(1e-13));
  }
  const double lambda0_expected =
      p.gamma * p.p0 * p.length *
      std::sqrt((p.sigma / mehler.beta) * (1.0 - mehler.mu * mehler.mu));
  CHECK(mehler.lambda(0) == doctest::Approx(lambda0_expected).epsilon(1e-12));

  // width-matched kernel is separable: single mode at gamma p0 L
  AnalyticParams matched = p;
  matched.beta1 = -2.0 * p.sigma / (std::sqrt(kSincGaussC) * p.length);
  MehlerDecomposition single = mehler_decomposition(matched, 4);
  CHECK(std::abs(single.mu) < 1e-14);
  CHECK(single.lambda(0) ==
        doctest::Approx(matched.gamma * matched.p0 * matched.length)
            .epsilon(1e-10));
  CHECK(single.lambda(1) < 1e-14 * single.lambda(0));
  CHECK(single.t0 / (std::sqrt(2.0) * p.sigma) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermite functions: explicit low orders and orthonormality") {
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(2001, -10.0, 10.0);
  const double dx = x(1) - x(0);
  const double norm0 = std::pow(kPi, -0.25);

  Eigen::ArrayXd h0 = hermite_function(0, x);
  Eigen::ArrayXd h1 = hermite_function(1, x);
  Eigen::ArrayXd h2 = hermite_function(2, x);
  Eigen::ArrayXd gauss = (-x.square() / 2.0).exp();
  CHECK((h0 - norm0 * gauss).abs().maxCoeff() < 1e-12);
  CHECK((h1 - norm0 * std::sqrt(2.0) * x * gauss).abs().maxCoeff() < 1e-12);
  CHECK((h2 - norm0 / std::sqrt(2.0) * (2.0 * x.square() - 1.0) * gauss)
            .abs()
            .maxCoeff() < 1e-12);

  for (int m = 0; m < 6; ++m) {
    Eigen::ArrayXd hm = hermite_function(m, x);
    for (int n = 0; n <= m; ++n) {
      const double ip = (hm * hermite_function(n, x)).sum() * dx;
      CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("spectral modes reconstruct the Gaussian kernel magnitude") {
  AnalyticParams p = long_pump_params();
  // moderate mode count suffices when the ladder decays fast
  p.beta1 = -2.0 * p.sigma / (1.5 * std::sqrt(kSincGaussC) * p.length);
  MehlerDecomposition mehler = mehler_decomposition(p, 40);
  CHECK(std::abs(mehler.mu) == doctest::Approx(0.2).epsilon(1e-12));

  Eigen::ArrayXd omega =
      Eigen::ArrayXd::LinSpaced(101, -4.0 / mehler.t0, 4.0 / mehler.t0);
  std::vector<Eigen::ArrayXd> phi(40);
  for (int n = 0; n < 40; ++n) phi[n] = spectral_mode(mehler, n, omega);

  // orthonormality, on a grid wide enough that the cut tails are negligible
  Eigen::ArrayXd wide =
      Eigen::ArrayXd::LinSpaced(201, -8.0 / mehler.t0, 8.0 / mehler.t0);
  const double dww = wide(1) - wide(0);
  Eigen::ArrayXd w0 = spectral_mode(mehler, 0, wide);
  Eigen::ArrayXd w2 = spectral_mode(mehler, 2, wide);
  CHECK(std::abs((w0 * w0).sum() * dww - 1.0) < 1e-10);
  CHECK(std::abs((w0 * w2).sum() * dww) < 1e-10);

  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < omega.size(); ++i) {
    for (int j = 0; j < omega.size(); ++j) {
      double series = 0.0;
      for (int n = 0; n < 40; ++n)
        series += mehler.lambda(n) * phi[n](i) * phi[n](j);
      const double kernel =
          std::abs(integrated_kernel(p, omega(i), omega(j), true));
      worst = std::max(worst, std::abs(series - kernel));
      scale = std::max(scale, kernel);
    }
  }
  CHECK(worst < 1e-6 * scale);
}

TEST_CASE("time-domain modes: delays, widths, and fidelity") {
  AnalyticParams p = long_pump_params();
  MehlerDecomposition mehler = mehler_decomposition(p, 6);
  TemporalMesh mesh = TemporalMesh::create(4096, 4000e-12);

  // beta1 < 0: the green input leads by |beta1| L / 2, the blue input lags
  const double d0 = -p.beta1 * p.length / 2.0;
  Eigen::ArrayXcd vg = analytic_mode_time(mesh, mehler, p, ModeFamily::input_green, 0);
  Eigen::ArrayXcd vb = analytic_mode_time(mesh, mehler, p, ModeFamily::input_blue, 0);
  Eigen::ArrayXcd ug = analytic_mode_time(mesh, mehler, p, ModeFamily::output_green, 0);
  Eigen::ArrayXcd wb = analytic_mode_time(mesh, mehler, p, ModeFamily::output_blue, 0);
  CHECK(std::abs(centroid(mesh, vg) - d0) < 1e-3 * d0);
  CHECK(std::abs(centroid(mesh, vb) + d0) < 1e-3 * d0);
  CHECK(std::abs(centroid(mesh, ug) + d0) < 1e-3 * d0);
  CHECK(std::abs(centroid(mesh, wb) - d0) < 1e-3 * d0);

  CHECK(std::abs(pulse_energy(mesh, vg) - 1.0) < 1e-9);

  // mode 0 is Gaussian with amplitude fwhm t0 * 2 sqrt(2 ln2)
  Eigen::ArrayXd mag = vg.abs();
  int peak_idx = 0;
  mag.maxCoeff(&peak_idx);
  const double half = mag(peak_idx) / 2.0;
  int lo = peak_idx, hi = peak_idx;
  while (lo > 0 && mag(lo) > half) --lo;
  while (hi < mesh.n - 1 && mag(hi) > half) ++hi;
  const double fwhm = mesh.t(hi) - mesh.t(lo);
  CHECK(fwhm / (mehler.t0 * 2.0 * std::sqrt(2.0 * std::log(2.0))) ==
        doctest::Approx(1.0).epsilon(0.03));

  // extra_delay shifts the centroid, mode 1 is orthogonal to mode 0
  Eigen::ArrayXcd shifted =
      analytic_mode_time(mesh, mehler, p, ModeFamily::input_green, 0, 50e-12);
  CHECK(std::abs(centroid(mesh, shifted) - (d0 + 50e-12)) < 1e-3 * d0);

  Eigen::ArrayXcd vg1 = analytic_mode_time(mesh, mehler, p, ModeFamily::input_green, 1);
  CHECK(mode_fidelity(mesh, vg, vg) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mode_fidelity(mesh, vg, vg1) < 1e-8);
  CHECK(mode_fidelity(mesh, vg, shifted) < 0.9);
}
