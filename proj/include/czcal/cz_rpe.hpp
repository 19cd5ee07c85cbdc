#pragma once

// Full three-phase RPE on a CZ gate: execute the 6(k_max+1) circuits on a
// backend, post-select, estimate each relative phase and invert to model
// coefficients. Analysis is a pure function of the stored counts, which is
// what makes run records replayable.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "czcal/backend.hpp"
#include "czcal/cz_design.hpp"
#include "czcal/rpe.hpp"

namespace czcal {

struct RpeConfig {
  int k_max = 6;
  std::int64_t shots = 100;
  ExpectationMode mode = ExpectationMode::kSampled;
  rpe::EstimatorOptions estimator;
  // Branch reference used when unwrapping phases into model coefficients.
  CzModelParams reference = CzModelParams::targets();
};

// Throws ConfigError for k_max < 0 or shots < 1.
void validate(const RpeConfig& config);

// The persisted primitive: one circuit's raw counts.
struct CircuitRecord {
  CircuitLabel label;
  int k = 0;
  ShotCounts counts;

  friend bool operator==(const CircuitRecord&, const CircuitRecord&) = default;
};

struct PhaseAnalysis {
  PhaseClass phase = PhaseClass::k00_01;
  std::vector<rpe::IQMeasurement> measurements;
  std::vector<rpe::GenerationEstimate> estimates;
  rpe::TrustedEstimate trusted;
};

// Per-angle RMS window pi/2^(k+1), with k the smallest last-trusted
// generation among the phases the angle depends on.
struct AngleWindows {
  CzModelParams window;
  std::array<int, 3> k_last{};  // theta_iz, theta_zi, theta_zz
};

struct CzRpeResult {
  std::vector<CircuitRecord> records;  // empty in exact mode
  std::array<PhaseAnalysis, 3> phases;
  RelativePhases relative;             // last trusted estimates
  CzModelParams estimated;
  int k_last = 0;                      // minimum over the three phases

  int phase_k_last(PhaseClass p) const { return phases[static_cast<int>(p)].trusted.k_last; }
  AngleWindows windows() const;
};

// Circuit i of generate_rpe_circuits(k_max) is sampled with derive_seed(seed, {i}).
CzRpeResult run_cz_rpe(const Backend& backend, const ControlPoint& point, const VirtualZ& vz,
                       const RpeConfig& config, std::uint64_t seed,
                       ExecPolicy policy = ExecPolicy::kParallel);

// Rebuilds the analysis from counts. Every (class, k, quadrature) for
// k = 0..k_max must be present exactly once (throws Error otherwise);
// AllShotsDiscarded propagates.
CzRpeResult analyze_records(std::span<const CircuitRecord> records, int k_max,
                            const rpe::EstimatorOptions& estimator = {},
                            const CzModelParams& reference = CzModelParams::targets());

}  // namespace czcal
