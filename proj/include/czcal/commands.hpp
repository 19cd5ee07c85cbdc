#pragma once

// The CLI subcommands as library calls. Each writes its artifacts under
// config.output_dir (created if missing) and returns the in-memory result.

#include <filesystem>
#include <optional>

#include "czcal/calibration.hpp"
#include "czcal/conditionality.hpp"
#include "czcal/run_config.hpp"
#include "czcal/run_record.hpp"

namespace czcal {

struct CommandOptions {
  bool stamp = false;  // write a wall-clock timestamp into run records
  ExecPolicy policy = ExecPolicy::kParallel;
};

std::vector<ControlPoint> sweep_grid(const SweepConfig& sweep);

// conditionality.csv
SweepResult cmd_sweep(const RunConfig& config, const CommandOptions& options = {});

// rpe.jsonl, rpe_summary.json. The default point is the surrogate optimum.
CzRpeResult cmd_rpe(const RunConfig& config, const std::optional<ControlPoint>& point,
                    const CommandOptions& options = {});

struct CalibrationOutcome {
  std::optional<SweepResult> sweep;
  OptimizationResult optimization;
  CalibrationReport report;
};

// conditionality.csv (when the window is seeded from the sweep),
// calibration.jsonl, trajectory.csv, angles.csv, report.json.
CalibrationOutcome cmd_calibrate(const RunConfig& config, const CommandOptions& options = {});

ReplayReport cmd_replay(const std::filesystem::path& run_record);

}  // namespace czcal
