#pragma once

#include <cmath>
#include <numbers>

namespace fwsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wrap an angle into (-pi, pi].
inline double wrap_pi(double angle) {
    double y = std::fmod(angle + kPi, kTwoPi);
    if (y <= 0.0) {
        y += kTwoPi;
    }
    return y - kPi;
}

/// Shortest signed angular difference (to - from), in (-pi, pi].
inline double angle_diff(double to, double from) { return wrap_pi(to - from); }

}  // namespace fwsim
