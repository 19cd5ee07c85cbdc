#pragma once

// Devices that execute circuits at a control setting, and the batched
// execution kernels (serial reference and OpenMP).

#include <cstdint>
#include <span>
#include <vector>

#include "czcal/circuit.hpp"
#include "czcal/cz_design.hpp"
#include "czcal/exec.hpp"
#include "czcal/sim_core.hpp"
#include "czcal/surrogate.hpp"

namespace czcal {

// kExact replaces finite-shot counts by the outcome distribution itself.
enum class ExpectationMode { kSampled, kExact };

class Backend {
 public:
  virtual ~Backend() = default;

  // Reported-outcome distribution of `circuit` with virtual Z rotations `vz`
  // folded into the gate.
  virtual OutcomeProbabilities probabilities(const CircuitSpec& circuit, const ControlPoint& point,
                                             const VirtualZ& vz) const = 0;

  virtual ShotCounts run(const CircuitSpec& circuit, const ControlPoint& point, const VirtualZ& vz,
                         std::int64_t shots, std::uint64_t seed) const {
    return sample_distribution(probabilities(circuit, point, vz), shots, seed);
  }
};

// The surrogate device: control_to_model followed by exact simulation.
class SurrogateBackend final : public Backend {
 public:
  explicit SurrogateBackend(SurrogateConfig config);

  OutcomeProbabilities probabilities(const CircuitSpec& circuit, const ControlPoint& point,
                                     const VirtualZ& vz) const override;

  const SurrogateConfig& config() const { return config_; }

 private:
  SurrogateConfig config_;
};

// A gate with fixed coefficients and noise; the control point is ignored.
class FixedModelBackend final : public Backend {
 public:
  FixedModelBackend(CzModelParams params, NoiseModel noise);

  OutcomeProbabilities probabilities(const CircuitSpec& circuit, const ControlPoint& point,
                                     const VirtualZ& vz) const override;

 private:
  CzModelParams params_;
  NoiseModel noise_;
};

// Circuit i is sampled with derive_seed(seed, {i}), so the result does not
// depend on the policy.
std::vector<ShotCounts> run_batch(const Backend& backend, std::span<const CircuitSpec> circuits,
                                  const ControlPoint& point, const VirtualZ& vz, std::int64_t shots,
                                  std::uint64_t seed, ExecPolicy policy = ExecPolicy::kParallel);

std::vector<OutcomeProbabilities> probabilities_batch(const Backend& backend,
                                                      std::span<const CircuitSpec> circuits,
                                                      const ControlPoint& point, const VirtualZ& vz,
                                                      ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace czcal
