#pragma once

// Exact two-qubit density-matrix simulation with coherent, depolarizing,
// preparation and readout errors, plus seeded shot sampling.

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "czcal/circuit.hpp"
#include "czcal/model.hpp"

namespace czcal {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

// 4x4 Hermitian, trace-1, positive semidefinite (checked by is_valid_state).
using DensityMatrix = Mat4;

// Row-stochastic confusion matrix: row = prepared bit, column = reported bit.
using Confusion = std::array<std::array<double, 2>, 2>;

inline constexpr Confusion kIdealReadout = {{{1.0, 0.0}, {0.0, 1.0}}};

inline Confusion symmetric_flip(double p) { return {{{1.0 - p, p}, {p, 1.0 - p}}}; }

struct NoiseModel {
  double depolarizing_rate_per_cz = 0.0;
  double depolarizing_rate_per_1q = 0.0;
  std::array<Confusion, 2> readout_confusion = {kIdealReadout, kIdealReadout};
  std::array<double, 2> prep_flip_prob = {0.0, 0.0};

  static NoiseModel ideal() { return {}; }
};

// Throws ConfigError if a probability is outside [0, 1] or a confusion row
// does not sum to 1 within 1e-12.
void validate(const NoiseModel& noise);

// Outcome-indexed (2a + b) counts or probabilities.
struct ShotCounts {
  std::array<std::uint64_t, 4> counts{};

  std::uint64_t operator[](Outcome o) const { return counts[static_cast<int>(o)]; }
  std::uint64_t& operator[](Outcome o) { return counts[static_cast<int>(o)]; }
  std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

  friend bool operator==(const ShotCounts&, const ShotCounts&) = default;
};

using OutcomeProbabilities = std::array<double, 4>;

// ---- operators -------------------------------------------------------------

Mat4 build_cz_unitary(const CzModelParams& params);

// Rx/Ry rotations exp(-i angle sigma/2); X is the Pauli matrix (Rx(pi) up to a
// global phase). CZ is not a one-qubit kind and is rejected.
Mat2 build_1q_gate(GateKind kind, double angle = 0.0);

// Embeds a one-qubit operator on `target` (A is the first tensor factor).
Mat4 embed(const Mat2& op, Qubit target);

// ---- channels --------------------------------------------------------------

// rho -> (1 - p) rho + p I/4
DensityMatrix depolarize_two_qubit(const DensityMatrix& rho, double p);
// rho -> (1 - p) rho + p (I/2 (x) Tr_q rho), on qubit q
DensityMatrix depolarize_one_qubit(const DensityMatrix& rho, double p, Qubit q);

// Product state after independent classical bit flips on |00>.
DensityMatrix prepared_state(const NoiseModel& noise);

// ---- execution -------------------------------------------------------------

// Layers are applied in order. Each gate is followed by its depolarizing
// channel. Throws InvalidCircuit for malformed circuits.
DensityMatrix apply_circuit(const CircuitSpec& circuit, const NoiseModel& noise,
                            const CzModelParams& params);

// Reported-outcome distribution: Born diagonal pushed through the per-qubit
// readout confusions. Throws InvariantViolation if a diagonal entry is below
// -1e-10.
OutcomeProbabilities outcome_probabilities(const DensityMatrix& state, const NoiseModel& noise);

// Multinomial draw of `shots` outcomes from outcome_probabilities; a pure
// function of its arguments. Throws std::invalid_argument for shots < 1.
ShotCounts sample_counts(const DensityMatrix& state, const NoiseModel& noise,
                         std::int64_t shots, std::uint64_t seed);
ShotCounts sample_distribution(const OutcomeProbabilities& probs, std::int64_t shots,
                               std::uint64_t seed);

bool is_valid_state(const DensityMatrix& rho, double herm_tol = 1e-12,
                    double trace_tol = 1e-12, double eig_tol = 1e-10);

double max_abs_deviation(const Mat4& a, const Mat4& b);

}  // namespace czcal
