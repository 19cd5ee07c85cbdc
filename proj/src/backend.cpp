#include "czcal/backend.hpp"

#include "czcal/random.hpp"

namespace czcal {

SurrogateBackend::SurrogateBackend(SurrogateConfig config) : config_(std::move(config)) {
  validate(config_);
}

OutcomeProbabilities SurrogateBackend::probabilities(const CircuitSpec& circuit,
                                                     const ControlPoint& point,
                                                     const VirtualZ& vz) const {
  const auto [params, noise] = control_to_model(point, config_);
  return outcome_probabilities(apply_circuit(circuit, noise, with_virtual_z(params, vz)), noise);
}

FixedModelBackend::FixedModelBackend(CzModelParams params, NoiseModel noise)
    : params_(params), noise_(std::move(noise)) {
  validate(noise_);
}

OutcomeProbabilities FixedModelBackend::probabilities(const CircuitSpec& circuit,
                                                      const ControlPoint&,
                                                      const VirtualZ& vz) const {
  return outcome_probabilities(apply_circuit(circuit, noise_, with_virtual_z(params_, vz)), noise_);
}

std::vector<ShotCounts> run_batch(const Backend& backend, std::span<const CircuitSpec> circuits,
                                  const ControlPoint& point, const VirtualZ& vz, std::int64_t shots,
                                  std::uint64_t seed, ExecPolicy policy) {
  std::vector<ShotCounts> out(circuits.size());
  for_each_index(circuits.size(), policy, [&](std::size_t i) {
    out[i] = backend.run(circuits[i], point, vz, shots, derive_seed(seed, {i}));
  });
  return out;
}

std::vector<OutcomeProbabilities> probabilities_batch(const Backend& backend,
                                                      std::span<const CircuitSpec> circuits,
                                                      const ControlPoint& point, const VirtualZ& vz,
                                                      ExecPolicy policy) {
  std::vector<OutcomeProbabilities> out(circuits.size());
  for_each_index(circuits.size(), policy,
                 [&](std::size_t i) { out[i] = backend.probabilities(circuits[i], point, vz); });
  return out;
}

}  // namespace czcal
