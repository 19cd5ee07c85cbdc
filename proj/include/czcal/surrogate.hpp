#pragma once

// Synthetic device: control settings (drive amplitude, detuning) mapped to
// effective CZ model coefficients and noise.

#include <utility>

#include "czcal/model.hpp"
#include "czcal/sim_core.hpp"

namespace czcal {

struct ControlPoint {
  double amplitude = 0.0;  // dimensionless drive scale, >= 0
  double frequency = 0.0;  // detuning, arbitrary units

  friend bool operator==(const ControlPoint&, const ControlPoint&) = default;
};

// Local-phase offsets, affine in relative drive power ((a/a*)^2 - 1) and
// detuning (f - f*).
struct StarkCoefficients {
  double iz_at_optimum = 0.07;
  double zi_at_optimum = -0.04;
  double iz_per_power = 0.15;
  double zi_per_power = -0.10;
  double iz_per_detuning = 0.05;
  double zi_per_detuning = 0.08;
};

struct SurrogateConfig {
  double amp_star = 1.0;
  double freq_star = 0.0;
  // Lorentzian half-width of the theta_zz frequency response.
  double detuning_width = 0.5;
  StarkCoefficients stark;
  NoiseModel noise_floor;
  // Added to the per-CZ depolarizing rate per unit of |point - optimum|.
  double noise_slope = 0.0;
};

// Throws ConfigError on non-finite fields, amp_star <= 0, detuning_width <= 0,
// noise_slope < 0 or an invalid noise floor.
void validate(const SurrogateConfig& config);

// theta_zz = -(pi/2) (a/a*)^2 / (1 + ((f - f*)/w)^2); theta_iz, theta_zi are
// pi/2 plus the Stark offsets; depolarizing per CZ grows linearly with the
// distance from the optimum (clamped to [0, 1]).
std::pair<CzModelParams, NoiseModel> control_to_model(const ControlPoint& point,
                                                      const SurrogateConfig& config);

// Amplitude on the theta_zz = -pi/2 level set at detuning `frequency`.
double optimal_amplitude(double frequency, const SurrogateConfig& config);

}  // namespace czcal
