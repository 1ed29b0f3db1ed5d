#pragma once

#include <functional>
#include <optional>
#include <utility>

namespace qft {

// Brent's method on a bracket [a, b] with f(a) * f(b) <= 0.
// Converges to |x - root| < xtol + rtol * |x|.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 0.0, double rtol = 4e-16, int max_iter = 200);

// Scan [a, b] with n uniform samples and return the first sign-change bracket.
std::optional<std::pair<double, double>> bracket_root(
    const std::function<double(double)>& f, double a, double b, int n);

} // namespace qft
