#include "qft/fiber.hpp"

#include <cmath>

#include "qft/constants.hpp"
#include "qft/errors.hpp"
#include "qft/rootfind.hpp"

namespace qft {

namespace {

constexpr double kFirstJ0Zero = 2.404825557695773;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

} // namespace

double silica_index(double wavelength) {
  const double um = wavelength * 1e6;
  if (um < 0.21 || um > 6.7) {
    throw std::invalid_argument("silica_index: wavelength outside Sellmeier validity");
  }
  static constexpr double B[3] = {0.6961663, 0.4079426, 0.8974794};
  static constexpr double L[3] = {0.0684043, 0.1162414, 9.896161};
  const double l2 = um * um;
  double n2 = 1.0;
  for (int i = 0; i < 3; ++i) {
    n2 += B[i] * l2 / (l2 - L[i] * L[i]);
  }
  return std::sqrt(n2);
}

double cladding_index(double n_core, double air_fill) {
  if (air_fill < 0.0 || air_fill > 1.0) {
    throw std::invalid_argument("cladding_index: air fill must be in [0, 1]");
  }
  return air_fill * 1.0 + (1.0 - air_fill) * n_core;
}

GuidedMode solve_fundamental_mode(const FiberSpec& fiber, double wavelength) {
  const double n1 = silica_index(wavelength);
  const double n2 = cladding_index(n1, fiber.air_fill);
  const double k = 2.0 * kPi / wavelength;
  const double a = fiber.core_radius;
  const double v = a * k * std::sqrt(n1 * n1 - n2 * n2);
  const double n2n1_sq = (n2 / n1) * (n2 / n1);

  // Characteristic function of the fundamental vector mode:
  //   (Jp + Kp)(Jp + (n2/n1)^2 Kp) = (beta/(k n1))^2 (1/u^2 + 1/w^2)^2
  // with Jp = J1'(u)/(u J1(u)) and Kp = K1'(w)/(w K1(w)).
  auto characteristic = [&](double u) {
    const double w = std::sqrt(v * v - u * u);
    const double j0 = std::cyl_bessel_j(0, u);
    const double j1 = std::cyl_bessel_j(1, u);
    const double k0 = std::cyl_bessel_k(0, w);
    const double k1 = std::cyl_bessel_k(1, w);
    const double jp = (j0 - j1 / u) / (u * j1);
    const double kp = (-k0 - k1 / w) / (w * k1);
    const double beta_over_kn1_sq = (n1 * n1 - (u / (a * k)) * (u / (a * k))) / (n1 * n1);
    const double inv = 1.0 / (u * u) + 1.0 / (w * w);
    return (jp + kp) * (jp + n2n1_sq * kp) - beta_over_kn1_sq * inv * inv;
  };

  const double u_lo = 1e-6;
  const double u_hi = std::min(v * (1.0 - 1e-12), kFirstJ0Zero);
  const auto bracket = bracket_root(characteristic, u_lo, u_hi, 2000);
  if (!bracket) {
    throw NumericalError("solve_fundamental_mode: no guided root bracketed");
  }
  const double u = find_root(characteristic, bracket->first, bracket->second, 1e-15);

  GuidedMode mode;
  mode.u = u;
  mode.w = std::sqrt(v * v - u * u);
  mode.v_number = v;
  mode.n_core = n1;
  mode.n_clad = n2;
  mode.beta = std::sqrt(k * k * n1 * n1 - u * u / (a * a));
  return mode;
}

DispersionProfile::DispersionProfile(const FiberSpec& fiber, double lambda_min,
                                     double lambda_max)
    : omega_min_(2.0 * kPi * kSpeedOfLight / lambda_max),
      omega_max_(2.0 * kPi * kSpeedOfLight / lambda_min) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
    throw std::invalid_argument("DispersionProfile: bad wavelength range");
  }
  beta_fn_ = [fiber](double omega) {
    const double lambda = 2.0 * kPi * kSpeedOfLight / omega;
    return solve_fundamental_mode(fiber, lambda).beta;
  };
}

DispersionProfile::DispersionProfile(std::function<double(double)> beta_of_omega,
                                     double omega_min, double omega_max)
    : beta_fn_(std::move(beta_of_omega)),
      omega_min_(omega_min),
      omega_max_(omega_max) {}

double DispersionProfile::beta(double omega) const {
  if (omega < omega_min_ || omega > omega_max_) {
    throw std::invalid_argument("DispersionProfile: frequency outside profile range");
  }
  return beta_fn_(omega);
}

Eigen::ArrayXd DispersionProfile::derivatives(double omega0, int n_max) const {
  if (n_max < 0 || n_max > 4) {
    throw std::invalid_argument("DispersionProfile: derivative order must be 0..4");
  }
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n_max + 1);
  const double f0 = beta(omega0);
  out(0) = f0;
  if (n_max == 0) return out;

  const double h = rel_step_ * omega0;
  const double fp1 = beta(omega0 + h), fm1 = beta(omega0 - h);
  const double fp2 = beta(omega0 + 2 * h), fm2 = beta(omega0 - 2 * h);
  const double fp4 = (n_max >= 3) ? beta(omega0 + 4 * h) : 0.0;
  const double fm4 = (n_max >= 3) ? beta(omega0 - 4 * h) : 0.0;

  // Second-order central stencils at steps h and 2h, combined by one
  // Richardson step (4 d(h) - d(2h)) / 3 for fourth-order accuracy.
  auto richardson = [](double dh, double d2h) { return (4.0 * dh - d2h) / 3.0; };

  const double d1_h = (fp1 - fm1) / (2 * h);
  const double d1_2h = (fp2 - fm2) / (4 * h);
  out(1) = richardson(d1_h, d1_2h);

  if (n_max >= 2) {
    const double d2_h = (fp1 - 2 * f0 + fm1) / (h * h);
    const double d2_2h = (fp2 - 2 * f0 + fm2) / (4 * h * h);
    out(2) = richardson(d2_h, d2_2h);
  }
  if (n_max >= 3) {
    const double d3_h = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
    const double d3_2h = (fp4 - 2 * fp2 + 2 * fm2 - fm4) / (16 * h * h * h);
    out(3) = richardson(d3_h, d3_2h);
  }
  if (n_max >= 4) {
    const double h4 = h * h * h * h;
    const double d4_h = (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / h4;
    const double d4_2h = (fp4 - 4 * fp2 + 6 * f0 - 4 * fm2 + fm4) / (16 * h4);
    out(4) = richardson(d4_h, d4_2h);
  }
  return out;
}

double DispersionProfile::derivative(double omega0, int order) const {
  if (order < 0 || order > 4) {
    throw std::invalid_argument("DispersionProfile: derivative order must be 0..4");
  }
  return derivatives(omega0, order)(order);
}

double dispersion_parameter(const DispersionProfile& profile, double wavelength) {
  const double omega = 2.0 * kPi * kSpeedOfLight / wavelength;
  const double beta2 = profile.derivative(omega, 2);
  return -2.0 * kPi * kSpeedOfLight / (wavelength * wavelength) * beta2;
}

double group_velocity(const DispersionProfile& profile, double omega) {
  return 1.0 / profile.derivative(omega, 1);
}

double zero_dispersion_wavelength(const DispersionProfile& profile,
                                  double lambda_lo, double lambda_hi) {
  auto beta2_of_lambda = [&](double lambda) {
    return profile.derivative(2.0 * kPi * kSpeedOfLight / lambda, 2);
  };
  const auto bracket = bracket_root(beta2_of_lambda, lambda_lo, lambda_hi, 64);
  if (!bracket) {
    throw NumericalError("zero_dispersion_wavelength: no sign change on interval");
  }
  return find_root(beta2_of_lambda, bracket->first, bracket->second, 1e-15);
}

double phase_mismatch(const DispersionProfile& profile, const CarrierSet& carriers,
                      double gamma, double power_p, double power_q,
                      double detuning) {
  return profile.beta(carriers.omega_p) + profile.beta(carriers.omega_g + detuning)
       - profile.beta(carriers.omega_q) - profile.beta(carriers.omega_b + detuning)
       + gamma * (power_q - power_p);
}

PhaseMatchingCurve phase_matching_curve(const DispersionProfile& profile,
                                        const CarrierSet& carriers, double gamma,
                                        double power_p, double power_q,
                                        double length, double detuning_halfwidth,
                                        int n_points) {
  if (n_points < 5) throw std::invalid_argument("phase_matching_curve: too few points");
  PhaseMatchingCurve curve;
  curve.detuning = Eigen::ArrayXd::LinSpaced(n_points, -detuning_halfwidth,
                                             detuning_halfwidth);
  curve.efficiency.resize(n_points);
  // The pump wavenumbers do not move with the detuning; solve them once.
  const double pump_part = profile.beta(carriers.omega_p) -
                           profile.beta(carriers.omega_q) +
                           gamma * (power_q - power_p);
  for (int i = 0; i < n_points; ++i) {
    const double d = curve.detuning(i);
    const double kappa = pump_part + profile.beta(carriers.omega_g + d) -
                         profile.beta(carriers.omega_b + d);
    curve.efficiency(i) = sinc(0.5 * kappa * length);
  }

  // FWHM of the central lobe by linear interpolation of the half crossings
  // on each side of the peak.
  Eigen::Index ipk = 0;
  const double peak = curve.efficiency.maxCoeff(&ipk);
  const double half = 0.5 * peak;
  double left = curve.detuning(0), right = curve.detuning(n_points - 1);
  for (Eigen::Index i = ipk; i > 0; --i) {
    if (curve.efficiency(i - 1) < half) {
      const double f = (half - curve.efficiency(i - 1)) /
                       (curve.efficiency(i) - curve.efficiency(i - 1));
      left = curve.detuning(i - 1) + f * (curve.detuning(i) - curve.detuning(i - 1));
      break;
    }
  }
  for (Eigen::Index i = ipk; i + 1 < n_points; ++i) {
    if (curve.efficiency(i + 1) < half) {
      const double f = (curve.efficiency(i) - half) /
                       (curve.efficiency(i) - curve.efficiency(i + 1));
      right = curve.detuning(i) + f * (curve.detuning(i + 1) - curve.detuning(i));
      break;
    }
  }
  curve.fwhm = right - left;
  return curve;
}

CarrierSet tune_signal_carriers(const DispersionProfile& profile, double omega_p,
                                double omega_q, double omega_g_seed,
                                double search_halfwidth) {
  CarrierSet seed;
  seed.omega_p = omega_p;
  seed.omega_q = omega_q;
  seed.omega_g = omega_g_seed;
  seed.omega_b = omega_p + omega_g_seed - omega_q;
  const double pump_part = profile.beta(omega_p) - profile.beta(omega_q);
  auto mismatch = [&](double d) {
    return pump_part + profile.beta(seed.omega_g + d) -
           profile.beta(seed.omega_b + d);
  };
  const auto bracket = bracket_root(mismatch, -search_halfwidth, search_halfwidth, 257);
  if (!bracket) {
    throw NumericalError("tune_signal_carriers: no phase-matched detuning near seed");
  }
  const double d = find_root(mismatch, bracket->first, bracket->second, 1e-4);
  CarrierSet tuned = seed;
  tuned.omega_g += d;
  tuned.omega_b += d;
  return tuned;
}

} // namespace qft
