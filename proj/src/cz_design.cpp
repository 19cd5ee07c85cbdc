#include "czcal/cz_design.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace czcal {
namespace {

double nearest_branch(double phase, double reference) {
  return phase + kTwoPi * std::round((reference - phase) / kTwoPi);
}

}  // namespace

double RelativePhases::operator[](PhaseClass p) const {
  switch (p) {
    case PhaseClass::k00_01: return phi_00_01;
    case PhaseClass::k10_11: return phi_10_11;
    case PhaseClass::k01_11: return phi_01_11;
  }
  throw std::invalid_argument("invalid phase class");
}

double& RelativePhases::operator[](PhaseClass p) {
  switch (p) {
    case PhaseClass::k00_01: return phi_00_01;
    case PhaseClass::k10_11: return phi_10_11;
    case PhaseClass::k01_11: return phi_01_11;
  }
  throw std::invalid_argument("invalid phase class");
}

double wrap_phase(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w <= 0.0) w += kTwoPi;
  return w;
}

CircuitSpec make_rpe_circuit(CircuitLabel label, int k) {
  if (k < 0) throw std::invalid_argument("generation index must be >= 0");
  const bool q = label.quadrature == Quadrature::kQ;
  // The analysed qubit is prepared in |+> and unprepared with Ry(-pi/2) (I)
  // or Rx(-pi/2) (Q). Rx(-pi/2) sends |+y> to |1>, so the Q circuits count
  // the "1" outcome as the plus side.
  const Qubit probe = label.phase == PhaseClass::k01_11 ? Qubit::kA : Qubit::kB;
  const Gate prep = Gate::ry(probe, kPi / 2);
  const Gate unprep = q ? Gate::rx(probe, -kPi / 2) : Gate::ry(probe, -kPi / 2);
  const Outcome zero = Outcome::k00;
  const Outcome one = probe == Qubit::kA ? Outcome::k10 : Outcome::k01;

  CircuitSpec c;
  c.label = label;
  c.k = k;
  std::optional<Gate> flip;
  if (label.phase == PhaseClass::k10_11) flip = Gate::x(Qubit::kA);
  if (label.phase == PhaseClass::k01_11) flip = Gate::x(Qubit::kB);

  Layer first;
  if (flip && flip->target == Qubit::kA) first.push_back(*flip);
  first.push_back(prep);
  if (flip && flip->target == Qubit::kB) first.push_back(*flip);
  c.layers.push_back(first);

  c.layers.insert(c.layers.end(), std::size_t{1} << k, Layer{Gate::cz()});

  Layer last;
  if (flip && flip->target == Qubit::kA) last.push_back(*flip);
  last.push_back(unprep);
  if (flip && flip->target == Qubit::kB) last.push_back(*flip);
  c.layers.push_back(last);

  c.plus_outcomes = OutcomeSet{q ? one : zero};
  c.minus_outcomes = OutcomeSet{q ? zero : one};
  return c;
}

std::vector<CircuitSpec> generate_rpe_circuits(int k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  std::vector<CircuitSpec> out;
  out.reserve(6 * static_cast<std::size_t>(k_max + 1));
  for (PhaseClass p : kAllPhaseClasses) {
    for (int k = 0; k <= k_max; ++k) {
      out.push_back(make_rpe_circuit({p, Quadrature::kI}, k));
      out.push_back(make_rpe_circuit({p, Quadrature::kQ}, k));
    }
  }
  return out;
}

RelativePhases params_to_phases(const CzModelParams& p) {
  return {wrap_phase(p.theta_iz + p.theta_zz), wrap_phase(p.theta_iz - p.theta_zz),
          wrap_phase(p.theta_zi - p.theta_zz)};
}

CzModelParams phases_to_params(const RelativePhases& phases, const CzModelParams& reference) {
  const double phi1 = nearest_branch(phases.phi_00_01, reference.theta_iz + reference.theta_zz);
  const double phi2 = nearest_branch(phases.phi_10_11, reference.theta_iz - reference.theta_zz);
  const double phi3 = nearest_branch(phases.phi_01_11, reference.theta_zi - reference.theta_zz);
  CzModelParams out;
  out.theta_iz = 0.5 * (phi1 + phi2);
  out.theta_zz = 0.5 * (phi1 - phi2);
  out.theta_zi = phi3 + out.theta_zz;
  return out;
}

const InverseMap& inverse_phase_map() {
  static const InverseMap m = {{
      {0.5, 0.5, 0.0},   // theta_iz
      {0.5, -0.5, 1.0},  // theta_zi
      {0.5, -0.5, 0.0},  // theta_zz
  }};
  return m;
}

CzModelParams propagate_uncertainty(const RelativePhases& s) {
  const InverseMap& c = inverse_phase_map();
  const std::array<double, 3> sigma = {s.phi_00_01, s.phi_10_11, s.phi_01_11};
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += (c[j][i] * sigma[i]) * (c[j][i] * sigma[i]);
    out[j] = std::sqrt(acc);
  }
  return {out[0], out[1], out[2]};
}

VirtualZ virtual_z_correction(const CzModelParams& estimated) {
  return {kPi / 2 - estimated.theta_iz, kPi / 2 - estimated.theta_zi};
}

CzModelParams with_virtual_z(const CzModelParams& params, const VirtualZ& vz) {
  return {params.theta_iz + vz.phi_iz, params.theta_zi + vz.phi_zi, params.theta_zz};
}

std::array<double, 4> eigenphase_table(const CzModelParams& p) {
  return {p.theta_zi + p.theta_iz + p.theta_zz, p.theta_zi - p.theta_iz - p.theta_zz,
          -p.theta_zi + p.theta_iz - p.theta_zz, -p.theta_zi - p.theta_iz + p.theta_zz};
}

}  // namespace czcal
