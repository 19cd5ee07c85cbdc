#include "czcal/sim_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "czcal/error.hpp"
#include "czcal/random.hpp"

namespace czcal {
namespace {

constexpr Complex kI{0.0, 1.0};

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void check_probability(double p, const char* what) {
  if (!is_probability(p)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

Mat2 pauli(int which) {
  Mat2 m;
  switch (which) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m.setIdentity(); break;
  }
  return m;
}

DensityMatrix conjugate(const DensityMatrix& rho, const Mat4& u) { return u * rho * u.adjoint(); }

// Diagonal unitary conjugation: rho_ij -> u_i rho_ij conj(u_j).
DensityMatrix conjugate_diagonal(const DensityMatrix& rho, const Eigen::Vector4cd& diag) {
  DensityMatrix out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = diag(i) * rho(i, j) * std::conj(diag(j));
  }
  return out;
}

}  // namespace

void validate(const NoiseModel& noise) {
  check_probability(noise.depolarizing_rate_per_cz, "depolarizing_rate_per_cz");
  check_probability(noise.depolarizing_rate_per_1q, "depolarizing_rate_per_1q");
  for (int q = 0; q < 2; ++q) {
    check_probability(noise.prep_flip_prob[q], "prep_flip_prob");
    for (const auto& row : noise.readout_confusion[q]) {
      check_probability(row[0], "readout_confusion entry");
      check_probability(row[1], "readout_confusion entry");
      if (std::abs(row[0] + row[1] - 1.0) > 1e-12) {
        throw ConfigError("readout_confusion rows must sum to 1");
      }
    }
  }
}

Mat4 build_cz_unitary(const CzModelParams& params) {
  // The generator is diagonal: eigenvalue of ZI, IZ, ZZ on |ab> is
  // z_a, z_b, z_a z_b with z = +1 for 0 and -1 for 1.
  Mat4 u = Mat4::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double za = a == 0 ? 1.0 : -1.0;
      const double zb = b == 0 ? 1.0 : -1.0;
      const double h = params.theta_zi * za + params.theta_iz * zb + params.theta_zz * za * zb;
      u(2 * a + b, 2 * a + b) = std::exp(-0.5 * kI * h);
    }
  }
  return u;
}

Mat2 build_1q_gate(GateKind kind, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  Mat2 m;
  switch (kind) {
    case GateKind::kRx:
      m << c, -kI * s, -kI * s, c;
      return m;
    case GateKind::kRy:
      m << c, -s, s, c;
      return m;
    case GateKind::kX:
      return pauli(1);
    case GateKind::kCz:
      break;
  }
  throw std::invalid_argument("build_1q_gate: not a one-qubit gate kind");
}

Mat4 embed(const Mat2& op, Qubit target) {
  const Mat2 id = Mat2::Identity();
  const Mat2& left = target == Qubit::kA ? op : id;
  const Mat2& right = target == Qubit::kA ? id : op;
  Mat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
  }
  return out;
}

DensityMatrix depolarize_two_qubit(const DensityMatrix& rho, double p) {
  return (1.0 - p) * rho + (p / 4.0) * Mat4::Identity();
}

DensityMatrix depolarize_one_qubit(const DensityMatrix& rho, double p, Qubit q) {
  if (p == 0.0) return rho;
  DensityMatrix twirl = rho;
  for (int k = 1; k <= 3; ++k) twirl += conjugate(rho, embed(pauli(k), q));
  return (1.0 - p) * rho + (p / 4.0) * twirl;
}

DensityMatrix prepared_state(const NoiseModel& noise) {
  const double pa = noise.prep_flip_prob[0];
  const double pb = noise.prep_flip_prob[1];
  const double a[2] = {1.0 - pa, pa};
  const double b[2] = {1.0 - pb, pb};
  DensityMatrix rho = DensityMatrix::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) rho(2 * i + j, 2 * i + j) = a[i] * b[j];
  }
  return rho;
}

DensityMatrix apply_circuit(const CircuitSpec& circuit, const NoiseModel& noise,
                            const CzModelParams& params) {
  validate(circuit);
  const Eigen::Vector4cd cz = build_cz_unitary(params).diagonal();
  DensityMatrix rho = prepared_state(noise);
  for (const Layer& layer : circuit.layers) {
    for (const Gate& g : layer) {
      if (g.kind == GateKind::kCz) {
        rho = conjugate_diagonal(rho, cz);
        if (noise.depolarizing_rate_per_cz > 0.0) {
          rho = depolarize_two_qubit(rho, noise.depolarizing_rate_per_cz);
        }
      } else {
        rho = conjugate(rho, embed(build_1q_gate(g.kind, g.angle), g.target));
        rho = depolarize_one_qubit(rho, noise.depolarizing_rate_per_1q, g.target);
      }
    }
  }
  return rho;
}

OutcomeProbabilities outcome_probabilities(const DensityMatrix& state, const NoiseModel& noise) {
  std::array<double, 4> born{};
  for (int i = 0; i < 4; ++i) {
    const double d = state(i, i).real();
    if (d < -1e-10) throw InvariantViolation("negative population on the state diagonal");
    born[i] = std::max(d, 0.0);
  }
  const Confusion& ca = noise.readout_confusion[0];
  const Confusion& cb = noise.readout_confusion[1];
  OutcomeProbabilities out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double p = 0.0;
      for (int ta = 0; ta < 2; ++ta) {
        for (int tb = 0; tb < 2; ++tb) p += born[2 * ta + tb] * ca[ta][a] * cb[tb][b];
      }
      out[2 * a + b] = p;
    }
  }
  return out;
}

ShotCounts sample_distribution(const OutcomeProbabilities& probs, std::int64_t shots,
                               std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  double total = 0.0;
  std::array<double, 4> cdf{};
  for (int i = 0; i < 4; ++i) {
    total += probs[i];
    cdf[i] = total;
  }
  Rng rng(seed);
  ShotCounts counts;
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    int i = 0;
    while (i < 3 && u >= cdf[i]) ++i;
    while (i > 0 && probs[i] == 0.0) --i;  // u rounded up to total
    ++counts.counts[i];
  }
  return counts;
}

ShotCounts sample_counts(const DensityMatrix& state, const NoiseModel& noise, std::int64_t shots,
                         std::uint64_t seed) {
  return sample_distribution(outcome_probabilities(state, noise), shots, seed);
}

bool is_valid_state(const DensityMatrix& rho, double herm_tol, double trace_tol, double eig_tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > trace_tol) return false;
  const Mat4 h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -eig_tol;
}

double max_abs_deviation(const Mat4& a, const Mat4& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace czcal
