#include "czcal/cz_rpe.hpp"

#include <algorithm>
#include <optional>

#include "czcal/error.hpp"

namespace czcal {
namespace {

std::size_t slot(PhaseClass p, int k, Quadrature q, int k_max) {
  return (static_cast<std::size_t>(p) * static_cast<std::size_t>(k_max + 1) +
          static_cast<std::size_t>(k)) * 2 + static_cast<std::size_t>(q);
}

// Circuits for one generation, looked up by label.
const CircuitSpec& circuit_for(const std::vector<CircuitSpec>& circuits, PhaseClass p, int k,
                               Quadrature q, int k_max) {
  return circuits[slot(p, k, q, k_max)];
}

void finish(CzRpeResult& result, const rpe::EstimatorOptions& estimator,
            const CzModelParams& reference) {
  int k_min = -1;
  for (PhaseAnalysis& pa : result.phases) {
    pa.estimates = rpe::estimate_generations(pa.measurements, estimator);
    pa.trusted = rpe::last_trusted_estimate(pa.estimates);
    result.relative[pa.phase] = pa.trusted.phi;
    k_min = k_min < 0 ? pa.trusted.k_last : std::min(k_min, pa.trusted.k_last);
  }
  result.k_last = k_min;
  result.estimated = phases_to_params(result.relative, reference);
}

}  // namespace

void validate(const RpeConfig& config) {
  if (config.k_max < 0) throw ConfigError("rpe.k_max must be >= 0");
  if (config.k_max > 30) throw ConfigError("rpe.k_max must be <= 30");
  if (config.shots < 1) throw ConfigError("rpe.shots must be >= 1");
}

AngleWindows CzRpeResult::windows() const {
  const int k1 = phase_k_last(PhaseClass::k00_01);
  const int k2 = phase_k_last(PhaseClass::k10_11);
  const int k3 = phase_k_last(PhaseClass::k01_11);
  AngleWindows w;
  w.k_last = {std::min(k1, k2), std::min({k1, k2, k3}), std::min(k1, k2)};
  w.window = {rpe::rms_bound(w.k_last[0]), rpe::rms_bound(w.k_last[1]),
              rpe::rms_bound(w.k_last[2])};
  return w;
}

CzRpeResult run_cz_rpe(const Backend& backend, const ControlPoint& point, const VirtualZ& vz,
                       const RpeConfig& config, std::uint64_t seed, ExecPolicy policy) {
  validate(config);
  const std::vector<CircuitSpec> circuits = generate_rpe_circuits(config.k_max);

  if (config.mode == ExpectationMode::kSampled) {
    const std::vector<ShotCounts> counts =
        run_batch(backend, circuits, point, vz, config.shots, seed, policy);
    std::vector<CircuitRecord> records;
    records.reserve(circuits.size());
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      records.push_back({circuits[i].label, circuits[i].k, counts[i]});
    }
    return analyze_records(records, config.k_max, config.estimator, config.reference);
  }

  const std::vector<OutcomeProbabilities> probs = probabilities_batch(backend, circuits, point, vz, policy);
  CzRpeResult result;
  for (PhaseClass p : kAllPhaseClasses) {
    PhaseAnalysis& pa = result.phases[static_cast<int>(p)];
    pa.phase = p;
    for (int k = 0; k <= config.k_max; ++k) {
      const CircuitSpec& ci = circuit_for(circuits, p, k, Quadrature::kI, config.k_max);
      const CircuitSpec& cq = circuit_for(circuits, p, k, Quadrature::kQ, config.k_max);
      const double i = rpe::post_selected_expectation(probs[slot(p, k, Quadrature::kI, config.k_max)],
                                                      ci.plus_outcomes, ci.minus_outcomes).value;
      const double q = rpe::post_selected_expectation(probs[slot(p, k, Quadrature::kQ, config.k_max)],
                                                      cq.plus_outcomes, cq.minus_outcomes).value;
      pa.measurements.push_back(rpe::IQMeasurement::exact(k, i, q));
    }
  }
  finish(result, config.estimator, config.reference);
  return result;
}

CzRpeResult analyze_records(std::span<const CircuitRecord> records, int k_max,
                            const rpe::EstimatorOptions& estimator,
                            const CzModelParams& reference) {
  if (k_max < 0) throw Error("k_max must be >= 0");
  const std::size_t n = 6 * static_cast<std::size_t>(k_max + 1);
  std::vector<std::optional<ShotCounts>> table(n);
  for (const CircuitRecord& r : records) {
    if (r.k < 0 || r.k > k_max) throw Error("circuit record with k outside 0..k_max");
    auto& cell = table[slot(r.label.phase, r.k, r.label.quadrature, k_max)];
    if (cell) throw Error("duplicate circuit record for " + to_string(r.label));
    cell = r.counts;
  }

  CzRpeResult result;
  result.records.assign(records.begin(), records.end());
  for (PhaseClass p : kAllPhaseClasses) {
    PhaseAnalysis& pa = result.phases[static_cast<int>(p)];
    pa.phase = p;
    for (int k = 0; k <= k_max; ++k) {
      rpe::PostSelected ps[2];
      for (Quadrature q : {Quadrature::kI, Quadrature::kQ}) {
        const auto& cell = table[slot(p, k, q, k_max)];
        if (!cell) {
          throw Error("missing circuit record for " + to_string(CircuitLabel{p, q}) +
                      " k=" + std::to_string(k));
        }
        const CircuitSpec c = make_rpe_circuit({p, q}, k);
        ps[static_cast<int>(q)] = rpe::post_selected_expectation(*cell, c.plus_outcomes, c.minus_outcomes);
      }
      pa.measurements.push_back(rpe::IQMeasurement::from_counts(k, ps[0], ps[1]));
    }
  }
  finish(result, estimator, reference);
  return result;
}

}  // namespace czcal
