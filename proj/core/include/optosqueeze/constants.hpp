#pragma once

namespace osq {

// 2019 SI exact values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Config files quote frequencies in Hz; everything internal is rad/s.
inline constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }
inline constexpr double rad_to_hz(double w) { return w / two_pi; }

}  // namespace osq
