#pragma once

// Coarse calibration: conditionality R = |r0 - r1|^2 / 2 of the target qubit's
// equatorial Bloch vector, conditioned on the control qubit, and 2-D sweeps
// of R over control settings.

#include <cstdint>
#include <span>
#include <vector>

#include "czcal/backend.hpp"
#include "czcal/surrogate.hpp"

namespace czcal {

struct BlochXY {
  double x = 0.0;
  double y = 0.0;
};

struct ConditionalityResult {
  BlochXY r0;  // control in |0>
  BlochXY r1;  // control in |1>
  double value = 0.0;
};

// Qubit B starts in |+>, qubit A in |0> or |1>, one CZ is applied. X and Y
// components come from the k = 0 circuits of the phi00_01 and phi10_11
// classes (unprepare + readout + post-selection). Four circuits, circuit i
// sampled with derive_seed(seed, {i}). An estimated vector longer than 1 is
// rescaled to unit length, which keeps R in [0, 2].
ConditionalityResult conditionality(const Backend& backend, const ControlPoint& point,
                                    std::int64_t shots, std::uint64_t seed,
                                    ExpectationMode mode = ExpectationMode::kSampled);

double conditionality(const ControlPoint& point, const SurrogateConfig& config, std::int64_t shots,
                      std::uint64_t seed, ExpectationMode mode = ExpectationMode::kSampled);

struct SweepPoint {
  ControlPoint point;
  double conditionality = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // same order as the grid
  std::size_t argmax = 0;          // first maximum

  const SweepPoint& best() const { return points[argmax]; }
};

// Grid point i uses derive_seed(seed, {i}). Throws std::invalid_argument on
// an empty grid.
SweepResult coarse_sweep(std::span<const ControlPoint> grid, const Backend& backend,
                         std::int64_t shots, std::uint64_t seed,
                         ExpectationMode mode = ExpectationMode::kSampled,
                         ExecPolicy policy = ExecPolicy::kParallel);

// Row-major amplitude x frequency grid (amplitude varies slowest).
std::vector<ControlPoint> make_grid(double amp_lo, double amp_hi, int amp_steps, double freq_lo,
                                    double freq_hi, int freq_steps);

}  // namespace czcal
