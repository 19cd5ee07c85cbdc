#include "czcal/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "czcal/error.hpp"

namespace czcal {

void validate(const SurrogateConfig& c) {
  const double fields[] = {c.amp_star,
                           c.freq_star,
                           c.detuning_width,
                           c.noise_slope,
                           c.stark.iz_at_optimum,
                           c.stark.zi_at_optimum,
                           c.stark.iz_per_power,
                           c.stark.zi_per_power,
                           c.stark.iz_per_detuning,
                           c.stark.zi_per_detuning};
  for (double f : fields) {
    if (!std::isfinite(f)) throw ConfigError("surrogate parameters must be finite");
  }
  if (c.amp_star <= 0.0) throw ConfigError("amp_star must be > 0");
  if (c.detuning_width <= 0.0) throw ConfigError("detuning_width must be > 0");
  if (c.noise_slope < 0.0) throw ConfigError("noise_slope must be >= 0");
  validate(c.noise_floor);
}

std::pair<CzModelParams, NoiseModel> control_to_model(const ControlPoint& point,
                                                      const SurrogateConfig& config) {
  if (!std::isfinite(point.amplitude) || !std::isfinite(point.frequency)) {
    throw std::invalid_argument("control point must be finite");
  }
  const double power = (point.amplitude / config.amp_star) * (point.amplitude / config.amp_star);
  const double detuning = point.frequency - config.freq_star;
  const double x = detuning / config.detuning_width;
  const double response = power / (1.0 + x * x);

  const StarkCoefficients& s = config.stark;
  CzModelParams params;
  params.theta_zz = -kPi / 2 * response;
  params.theta_iz =
      kPi / 2 + s.iz_at_optimum + s.iz_per_power * (power - 1.0) + s.iz_per_detuning * detuning;
  params.theta_zi =
      kPi / 2 + s.zi_at_optimum + s.zi_per_power * (power - 1.0) + s.zi_per_detuning * detuning;

  NoiseModel noise = config.noise_floor;
  const double offset = std::hypot(point.amplitude - config.amp_star, detuning);
  noise.depolarizing_rate_per_cz =
      std::clamp(noise.depolarizing_rate_per_cz + config.noise_slope * offset, 0.0, 1.0);
  return {params, noise};
}

double optimal_amplitude(double frequency, const SurrogateConfig& config) {
  const double x = (frequency - config.freq_star) / config.detuning_width;
  return config.amp_star * std::sqrt(1.0 + x * x);
}

}  // namespace czcal
