#pragma once

#include <numbers>

namespace czcal {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coefficients of the commuting CZ model
//   U = exp(-(i/2)(theta_zi ZI + theta_iz IZ + theta_zz ZZ)),
// stored unwrapped (no modular reduction).
struct CzModelParams {
  double theta_iz = 0.0;
  double theta_zi = 0.0;
  double theta_zz = 0.0;

  static constexpr CzModelParams targets() { return {kPi / 2, kPi / 2, -kPi / 2}; }

  friend bool operator==(const CzModelParams&, const CzModelParams&) = default;
};

}  // namespace czcal
