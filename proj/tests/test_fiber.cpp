#include <doctest.h>

#include <cmath>

#include "qft/constants.hpp"
#include "qft/errors.hpp"
#include "qft/fiber.hpp"

using namespace qft;

namespace {

const FiberSpec kFiber{0.72e-6, 0.494, 0.1, 20.0};

double omega_of(double lambda) { return 2.0 * kPi * kSpeedOfLight / lambda; }

} // namespace

TEST_CASE("silica sellmeier index against handbook values") {
  CHECK(silica_index(587.6e-9) == doctest::Approx(1.4585).epsilon(5e-4));
  CHECK(silica_index(1550e-9) == doctest::Approx(1.4440).epsilon(5e-4));
  CHECK_THROWS_AS(silica_index(0.1e-6), std::invalid_argument);
  CHECK_THROWS_AS(silica_index(8e-6), std::invalid_argument);
}

TEST_CASE("cladding index: air-fill weighted mix") {
  CHECK(cladding_index(1.45, 0.0) == doctest::Approx(1.45));
  CHECK(cladding_index(1.45, 0.494) == doctest::Approx(0.494 + 0.506 * 1.45).epsilon(1e-12));
  CHECK(cladding_index(1.45, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("fundamental mode: guided root inside the physical bracket") {
  GuidedMode mode = solve_fundamental_mode(kFiber, 808e-9);
  const double k0 = 2.0 * kPi / 808e-9;
  CHECK(mode.beta > k0 * mode.n_clad);
  CHECK(mode.beta < k0 * mode.n_core);
  // u^2 + w^2 = V^2 ties the transverse parameters together
  CHECK(mode.u * mode.u + mode.w * mode.w ==
        doctest::Approx(mode.v_number * mode.v_number).epsilon(1e-10));

  // no guided mode without index contrast
  FiberSpec flat = kFiber;
  flat.air_fill = 0.0;
  CHECK_THROWS_AS(solve_fundamental_mode(flat, 808e-9), NumericalError);
}

TEST_CASE("group velocities pair up across the translation bands") {
  DispersionProfile profile(kFiber, 560e-9, 1750e-9);
  const double v808 = group_velocity(profile, omega_of(808e-9));
  const double v845 = group_velocity(profile, omega_of(845e-9));
  const double v673 = group_velocity(profile, omega_of(673e-9));
  const double v649 = group_velocity(profile, omega_of(649.319e-9));

  // each signal rides at its pump partner's speed
  CHECK(std::abs(v808 / v673 - 1.0) < 1e-4);
  CHECK(std::abs(v845 / v649 - 1.0) < 1e-4);
  // absolute speeds in the expected range
  CHECK(v808 == doctest::Approx(2.0049e8).epsilon(5e-3));
  CHECK(v673 == doctest::Approx(2.0049e8).epsilon(5e-3));
  CHECK(v845 == doctest::Approx(2.0044e8).epsilon(5e-3));
  CHECK(v649 == doctest::Approx(2.0044e8).epsilon(5e-3));
  // the two pairs are distinct (that splitting drives the walk-off physics)
  CHECK(std::abs(v808 - v845) / v808 > 1e-4);
}

TEST_CASE("zero-dispersion wavelength sits between the signal and pump bands") {
  DispersionProfile profile(kFiber, 560e-9, 1750e-9);
  double zdw = zero_dispersion_wavelength(profile, 640e-9, 840e-9);
  CHECK(zdw > 673e-9);
  CHECK(zdw < 808e-9);
  CHECK(zdw / 734e-9 == doctest::Approx(1.0).epsilon(0.02));

  // anomalous for the pumps, normal for the signals
  CHECK(profile.derivative(omega_of(808e-9), 2) < 0.0);
  CHECK(profile.derivative(omega_of(845e-9), 2) < 0.0);
  CHECK(profile.derivative(omega_of(673e-9), 2) > 0.0);

  // D changes sign across the zdw with the right orientation
  CHECK(dispersion_parameter(profile, 700e-9) < 0.0);
  CHECK(dispersion_parameter(profile, 800e-9) > 0.0);
}

TEST_CASE("derivative stencil is exact on polynomial profiles") {
  const double w0 = 2.5e15;
  {
    DispersionProfile linear([](double w) { return 3e-9 * w; }, 1e15, 4e15);
    Eigen::ArrayXd d = linear.derivatives(w0, 4);
    CHECK(d(0) / (3e-9 * w0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d(1) / 3e-9 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(d(2)) < 1e-9 * 3e-9 / w0);
  }
  {
    DispersionProfile quad([](double w) { return 1e-30 * w * w; }, 1e15, 4e15);
    CHECK(quad.derivative(w0, 2) / 2e-30 == doctest::Approx(1.0).epsilon(1e-8));
  }
  {
    DispersionProfile cubic([](double w) { return 1e-45 * w * w * w; }, 1e15, 4e15);
    CHECK(cubic.derivative(w0, 3) / 6e-45 == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("carrier tuning zeroes the linear mismatch near the seed") {
  DispersionProfile profile(kFiber, 560e-9, 1750e-9);
  CarrierSet carriers = tune_signal_carriers(profile, omega_of(808e-9),
                                             omega_of(845e-9), omega_of(673e-9));

  // energy conservation is built in
  CHECK(std::abs(carriers.omega_p + carriers.omega_g - carriers.omega_q -
                 carriers.omega_b) < 10.0);

  const double lambda_g = 2.0 * kPi * kSpeedOfLight / carriers.omega_g;
  CHECK(lambda_g / 672.9e-9 == doctest::Approx(1.0).epsilon(1e-3));

  // linear part only: evaluate with equal powers so the power term drops.
  // The achievable floor is the cancellation noise of two ~1e7 rad/m
  // wavenumbers, a few ulps of beta.
  CHECK(std::abs(phase_mismatch(profile, carriers, kFiber.gamma, 0.4, 0.4, 0.0)) < 1e-8);
}

TEST_CASE("phase-matching curve: acceptance bandwidth and 1/L scaling") {
  DispersionProfile profile(kFiber, 560e-9, 1750e-9);
  CarrierSet carriers = tune_signal_carriers(profile, omega_of(808e-9),
                                             omega_of(845e-9), omega_of(673e-9));

  PhaseMatchingCurve c20 = phase_matching_curve(profile, carriers, kFiber.gamma,
                                                0.4, 0.4, 20.0, 1.2e12, 241);
  CHECK(c20.efficiency.maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c20.fwhm == doctest::Approx(0.3e12).epsilon(0.2));

  PhaseMatchingCurve c40 = phase_matching_curve(profile, carriers, kFiber.gamma,
                                                0.4, 0.4, 40.0, 1.2e12, 241);
  CHECK(c40.fwhm / c20.fwhm == doctest::Approx(0.5).epsilon(0.03));
}
