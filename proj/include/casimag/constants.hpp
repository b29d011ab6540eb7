#pragma once

#include <numbers>

namespace casimag {

// CODATA 2018 exact or recommended values, SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double c = 299792458.0;             // m / s
inline constexpr double k_B = 1.380649e-23;          // J / K
inline constexpr double pi = std::numbers::pi;
inline constexpr const char* source = "CODATA 2018";
}  // namespace constants

inline constexpr const char* version = "1.0.0";

}  // namespace casimag
