#pragma once

// Run configuration: one JSON file describing the surrogate device, RPE
// depth and shots, optimizer, coarse sweep grid, seed and output directory.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "czcal/calibration.hpp"
#include "czcal/cz_rpe.hpp"
#include "czcal/surrogate.hpp"

namespace czcal {

struct SweepConfig {
  double amp_lo = 0.5, amp_hi = 1.5;
  int amp_steps = 11;
  double freq_lo = -0.5, freq_hi = 0.5;
  int freq_steps = 11;
  std::int64_t shots = 200;
};

struct RunConfig {
  SurrogateConfig surrogate;
  RpeConfig rpe;
  OptimizerConfig optimizer;
  // Center the optimizer's initial window on the sweep argmax.
  bool window_from_sweep = true;
  SweepConfig sweep;
  std::uint64_t seed = 20240917;
  std::filesystem::path output_dir = "czcal-out";
};

// Sub-seeds derived from the master seed.
struct RunSeeds {
  std::uint64_t sweep, optimizer, backend, finalize, rpe;
};
RunSeeds derive_run_seeds(std::uint64_t master);

// Missing keys keep their defaults; unknown keys are rejected. Throws
// ConfigError on any invalid value.
RunConfig parse_run_config(const nlohmann::ordered_json& j);
RunConfig load_run_config(const std::filesystem::path& path);
// Snapshot for run records. output_dir is left out so that records do not
// depend on where they were written.
nlohmann::ordered_json to_json(const RunConfig& config);

void validate(const RunConfig& config);
void validate(const SweepConfig& config);

}  // namespace czcal
