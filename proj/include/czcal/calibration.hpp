#pragma once

// Closed-loop calibration: RPE cost at candidate control points, a
// derivative-free search for the theta_zz target, then virtual-Z correction
// of the local phases.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "czcal/backend.hpp"
#include "czcal/cz_rpe.hpp"
#include "czcal/error.hpp"
#include "czcal/optimizer.hpp"

namespace czcal {

// |theta_zz + pi/2|
double zz_cost(const CzModelParams& estimated);

struct CostRecord {
  ControlPoint point;
  CzModelParams estimated;
  double cost = std::numeric_limits<double>::infinity();
  int k_last = 0;
  int iteration = 0;
  int candidate = 0;
  // Set when the evaluation failed; cost is then +inf and `estimated` is unset.
  std::optional<std::string> failure;

  bool failed() const { return failure.has_value(); }
};

// Evaluation failure carrying the control point.
class EvaluationError : public Error {
 public:
  EvaluationError(ControlPoint point, const std::string& what)
      : Error("evaluation at (" + std::to_string(point.amplitude) + ", " +
              std::to_string(point.frequency) + ") failed: " + what),
        point_(point) {}

  const ControlPoint& point() const { return point_; }

 private:
  ControlPoint point_;
};

struct Evaluation {
  CostRecord record;
  std::optional<CzRpeResult> rpe;  // unset when the evaluation failed
};

// Runs the full three-phase RPE at `point` and scores theta_zz. Throws
// EvaluationError when post-selection empties a circuit or the backend fails.
Evaluation evaluate_cost(const ControlPoint& point, const Backend& backend, const RpeConfig& rpe,
                         std::uint64_t seed, ExecPolicy policy = ExecPolicy::kSerial);

struct OptimizerConfig {
  int population = 10;
  int max_iterations = 30;
  SearchWindow initial_window{{0.9, 0.0}, 0.3, 0.3};
  // Stop once the best cost is at or below this; 0 runs the full budget.
  double convergence_cost = 0.0;
  std::uint64_t seed = 1;
  StrategyKind strategy = StrategyKind::kRankShrink;
  double shrink = 0.85;
};

// Throws ConfigError for population < 2, max_iterations < 1, an empty or
// non-finite window, negative or NaN convergence_cost, or shrink outside (0, 1].
void validate(const OptimizerConfig& config);

struct OptimizationResult {
  CostRecord best;
  std::vector<CostRecord> history;  // iteration-major, candidate order
  std::vector<SearchWindow> windows;  // sampling window of each iteration
};

// Called once per evaluation, in history order, on the calling thread.
using EvaluationObserver = std::function<void(const Evaluation&)>;

// Candidate c of iteration t is evaluated with derive_seed(backend_seed, {t, c});
// candidates within an iteration run under `policy`. Failed evaluations score
// +inf. Throws Error if every candidate of an iteration fails.
OptimizationResult optimize(const Backend& backend, const OptimizerConfig& config,
                            const RpeConfig& rpe, std::uint64_t backend_seed,
                            ExecPolicy policy = ExecPolicy::kParallel,
                            const EvaluationObserver& observer = {});

struct AngleReport {
  CzModelParams estimated;
  AngleWindows windows;
  int k_last = 0;
};

struct CalibrationReport {
  ControlPoint point;
  AngleReport before;
  VirtualZ correction;
  AngleReport after;
};

// Re-runs RPE at best.point, derives the virtual-Z correction, applies it
// through the backend and runs RPE once more. The two runs use
// derive_seed(seed, {0}) and derive_seed(seed, {1}).
CalibrationReport finalize_calibration(const CostRecord& best, const Backend& backend,
                                       const RpeConfig& rpe, std::uint64_t seed,
                                       const EvaluationObserver& observer = {});

}  // namespace czcal
