#pragma once

// CZ-specific RPE experiment design: the six circuit classes, the linear map
// between model coefficients and measured relative phases, and virtual-Z
// corrections.

#include <array>
#include <vector>

#include "czcal/circuit.hpp"
#include "czcal/model.hpp"

namespace czcal {

// Relative phases as produced by the estimator, each in (0, 2pi]:
//   phi_00_01 = theta_iz + theta_zz
//   phi_10_11 = theta_iz - theta_zz
//   phi_01_11 = theta_zi - theta_zz
struct RelativePhases {
  double phi_00_01 = 0.0;
  double phi_10_11 = 0.0;
  double phi_01_11 = 0.0;

  double operator[](PhaseClass p) const;
  double& operator[](PhaseClass p);

  friend bool operator==(const RelativePhases&, const RelativePhases&) = default;
};

struct VirtualZ {
  double phi_iz = 0.0;
  double phi_zi = 0.0;

  friend bool operator==(const VirtualZ&, const VirtualZ&) = default;
};

// Maps x into (0, 2pi].
double wrap_phase(double x);

// 6 (k_max + 1) circuits, ordered by phase class, then k, then I before Q.
// Circuit (class, k) holds prep, 2^k CZ layers, then the unprepare layer.
// Throws std::invalid_argument for k_max < 0.
std::vector<CircuitSpec> generate_rpe_circuits(int k_max);
CircuitSpec make_rpe_circuit(CircuitLabel label, int k);

RelativePhases params_to_phases(const CzModelParams& params);

// Unwraps each phase onto the 2pi branch nearest the (unwrapped) phase
// predicted by `reference`, then applies the exact inverse of the linear map.
CzModelParams phases_to_params(const RelativePhases& phases,
                               const CzModelParams& reference = CzModelParams::targets());

// Rows: (theta_iz, theta_zi, theta_zz); columns: (phi_00_01, phi_10_11, phi_01_11).
using InverseMap = std::array<std::array<double, 3>, 3>;
const InverseMap& inverse_phase_map();

// sigma(theta_j) = sqrt(sum_i (c_ji sigma(phi_i))^2) with c the inverse map.
CzModelParams propagate_uncertainty(const RelativePhases& phase_sigma);

// Local Z rotations that bring theta_iz and theta_zi to pi/2.
VirtualZ virtual_z_correction(const CzModelParams& estimated);

CzModelParams with_virtual_z(const CzModelParams& params, const VirtualZ& vz);

// Eigenphases per basis state {00, 01, 10, 11} in the sign convention
//   00: zi + iz + zz, 01: zi - iz - zz, 10: -zi + iz - zz, 11: -zi - iz + zz.
// These are -2 times the actual eigenphases of the model unitary, so entry
// differences are twice the measured relative phases (up to sign).
std::array<double, 4> eigenphase_table(const CzModelParams& params);

}  // namespace czcal
