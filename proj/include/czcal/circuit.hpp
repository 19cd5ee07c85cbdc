#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace czcal {

// Two-qubit computational-basis outcome. Qubit A is the left label and the
// first tensor factor, so the index is 2*a + b.
enum class Outcome : std::uint8_t { k00 = 0, k01 = 1, k10 = 2, k11 = 3 };

inline constexpr std::array<Outcome, 4> kAllOutcomes = {Outcome::k00, Outcome::k01,
                                                       Outcome::k10, Outcome::k11};

std::string_view outcome_label(Outcome o);
Outcome parse_outcome(std::string_view label);

// Small set of outcomes, stored as a 4-bit mask.
class OutcomeSet {
 public:
  constexpr OutcomeSet() = default;
  constexpr OutcomeSet(std::initializer_list<Outcome> outcomes) {
    for (Outcome o : outcomes) insert(o);
  }

  constexpr void insert(Outcome o) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<int>(o)); }
  constexpr bool contains(Outcome o) const { return (bits_ >> static_cast<int>(o)) & 1u; }
  constexpr bool disjoint(OutcomeSet other) const { return (bits_ & other.bits_) == 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(OutcomeSet, OutcomeSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class Qubit : std::uint8_t { kA = 0, kB = 1 };

enum class GateKind : std::uint8_t { kRx, kRy, kX, kCz };

// One gate. `target` and `angle` are ignored for CZ; `angle` is ignored for X.
struct Gate {
  GateKind kind = GateKind::kCz;
  Qubit target = Qubit::kA;
  double angle = 0.0;

  static Gate rx(Qubit q, double angle) { return {GateKind::kRx, q, angle}; }
  static Gate ry(Qubit q, double angle) { return {GateKind::kRy, q, angle}; }
  static Gate x(Qubit q) { return {GateKind::kX, q, 0.0}; }
  static Gate cz() { return {GateKind::kCz, Qubit::kA, 0.0}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

// Gates in a layer act on disjoint qubits.
using Layer = std::vector<Gate>;

// The three relative phases measured on the CZ gate.
enum class PhaseClass : std::uint8_t { k00_01 = 0, k10_11 = 1, k01_11 = 2 };
enum class Quadrature : std::uint8_t { kI = 0, kQ = 1 };

inline constexpr std::array<PhaseClass, 3> kAllPhaseClasses = {
    PhaseClass::k00_01, PhaseClass::k10_11, PhaseClass::k01_11};

struct CircuitLabel {
  PhaseClass phase = PhaseClass::k00_01;
  Quadrature quadrature = Quadrature::kI;

  friend bool operator==(const CircuitLabel&, const CircuitLabel&) = default;
};

// "phi00_01/I" etc.
std::string to_string(CircuitLabel label);
CircuitLabel parse_circuit_label(std::string_view text);
std::string_view phase_class_name(PhaseClass p);
PhaseClass parse_phase_class(std::string_view text);

struct CircuitSpec {
  CircuitLabel label;
  int k = 0;
  std::vector<Layer> layers;
  OutcomeSet plus_outcomes;
  OutcomeSet minus_outcomes;

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

int count_cz(const CircuitSpec& circuit);

// Throws InvalidCircuit for overlapping gates within a layer, CZ sharing a
// layer with another gate, non-finite angles, out-of-range enum values or
// overlapping post-selection sets.
void validate(const CircuitSpec& circuit);

// Line format, one circuit per line:
//   phi00_01/I k=0 plus=00 minus=01 | ry(1.5707963267948966)@B ; cz ; ry(-1.5707963267948966)@B
// One token per gate, layers separated by ';', angles with 17 significant digits.
std::string serialize(const CircuitSpec& circuit);
CircuitSpec parse_circuit(std::string_view line);

std::string serialize(const std::vector<CircuitSpec>& circuits);
std::vector<CircuitSpec> parse_circuits(std::string_view text);

}  // namespace czcal
