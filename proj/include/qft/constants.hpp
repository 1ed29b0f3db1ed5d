#pragma once

namespace qft {

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kHBar = 1.054571817e-34;            // J s
inline constexpr double kPi = 3.14159265358979323846;

} // namespace qft
