#include "czcal/conditionality.hpp"

#include <cmath>
#include <stdexcept>

#include "czcal/cz_design.hpp"
#include "czcal/random.hpp"
#include "czcal/rpe.hpp"

namespace czcal {
namespace {

// x and y come from separate circuits, so with finite shots the pair can lie
// outside the Bloch disk.
BlochXY onto_unit_disk(BlochXY r) {
  const double norm = std::hypot(r.x, r.y);
  if (norm > 1.0) return {r.x / norm, r.y / norm};
  return r;
}

}  // namespace

ConditionalityResult conditionality(const Backend& backend, const ControlPoint& point,
                                    std::int64_t shots, std::uint64_t seed, ExpectationMode mode) {
  const CircuitSpec circuits[4] = {
      make_rpe_circuit({PhaseClass::k00_01, Quadrature::kI}, 0),
      make_rpe_circuit({PhaseClass::k00_01, Quadrature::kQ}, 0),
      make_rpe_circuit({PhaseClass::k10_11, Quadrature::kI}, 0),
      make_rpe_circuit({PhaseClass::k10_11, Quadrature::kQ}, 0),
  };
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const CircuitSpec& c = circuits[i];
    if (mode == ExpectationMode::kExact) {
      v[i] = rpe::post_selected_expectation(backend.probabilities(c, point, {}), c.plus_outcomes,
                                            c.minus_outcomes).value;
    } else {
      const ShotCounts counts =
          backend.run(c, point, {}, shots, derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      v[i] = rpe::post_selected_expectation(counts, c.plus_outcomes, c.minus_outcomes).value;
    }
  }
  ConditionalityResult out;
  out.r0 = onto_unit_disk({v[0], v[1]});
  out.r1 = onto_unit_disk({v[2], v[3]});
  const double dx = out.r0.x - out.r1.x;
  const double dy = out.r0.y - out.r1.y;
  out.value = 0.5 * (dx * dx + dy * dy);
  return out;
}

double conditionality(const ControlPoint& point, const SurrogateConfig& config, std::int64_t shots,
                      std::uint64_t seed, ExpectationMode mode) {
  return conditionality(SurrogateBackend(config), point, shots, seed, mode).value;
}

SweepResult coarse_sweep(std::span<const ControlPoint> grid, const Backend& backend,
                         std::int64_t shots, std::uint64_t seed, ExpectationMode mode,
                         ExecPolicy policy) {
  if (grid.empty()) throw std::invalid_argument("coarse_sweep: empty grid");
  SweepResult result;
  result.points.resize(grid.size());
  for_each_index(grid.size(), policy, [&](std::size_t i) {
    result.points[i] = {grid[i], conditionality(backend, grid[i], shots, derive_seed(seed, {i}), mode).value};
  });
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].conditionality > result.points[result.argmax].conditionality) result.argmax = i;
  }
  return result;
}

std::vector<ControlPoint> make_grid(double amp_lo, double amp_hi, int amp_steps, double freq_lo,
                                    double freq_hi, int freq_steps) {
  if (amp_steps < 1 || freq_steps < 1) throw std::invalid_argument("grid needs at least one step per axis");
  auto at = [](double lo, double hi, int steps, int i) {
    return steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  };
  std::vector<ControlPoint> grid;
  grid.reserve(static_cast<std::size_t>(amp_steps) * static_cast<std::size_t>(freq_steps));
  for (int i = 0; i < amp_steps; ++i) {
    for (int j = 0; j < freq_steps; ++j) {
      grid.push_back({at(amp_lo, amp_hi, amp_steps, i), at(freq_lo, freq_hi, freq_steps, j)});
    }
  }
  return grid;
}

}  // namespace czcal
