#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "czcal/error.hpp"
#include "czcal/random.hpp"
#include "czcal/sim_core.hpp"
#include "oracle.hpp"

namespace czcal {
namespace {

constexpr double kTol = 1e-12;

Mat4 diag4(Complex a, Complex b, Complex c, Complex d) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

CircuitSpec random_circuit(Rng& rng, int max_depth) {
  CircuitSpec c;
  const int depth = 1 + static_cast<int>(rng.uniform() * max_depth);
  for (int d = 0; d < depth; ++d) {
    const double r = rng.uniform();
    if (r < 0.3) {
      c.layers.push_back({Gate::cz()});
      continue;
    }
    Layer layer;
    for (Qubit q : {Qubit::kA, Qubit::kB}) {
      const double pick = rng.uniform();
      const double angle = rng.uniform(-kPi, kPi);
      if (pick < 0.35) {
        layer.push_back(Gate::rx(q, angle));
      } else if (pick < 0.7) {
        layer.push_back(Gate::ry(q, angle));
      } else if (pick < 0.85) {
        layer.push_back(Gate::x(q));
      }
    }
    if (layer.empty()) layer.push_back(Gate::ry(Qubit::kA, rng.uniform(-kPi, kPi)));
    c.layers.push_back(layer);
  }
  return c;
}

CzModelParams random_params(Rng& rng) {
  return {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
}

DensityMatrix random_state(Rng& rng) {
  Mat4 g;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  }
  Mat4 rho = g * g.adjoint();
  return rho / rho.trace().real();
}

TEST(CzUnitary, TargetsGiveIdealCzUpToGlobalPhase) {
  const Mat4 u = build_cz_unitary(CzModelParams::targets());
  const Mat4 scaled = u / u(0, 0);
  EXPECT_LE(max_abs_deviation(scaled, diag4(1, 1, 1, -1)), kTol);
}

TEST(CzUnitary, ZeroParamsGiveIdentity) {
  EXPECT_LE(max_abs_deviation(build_cz_unitary({0, 0, 0}), Mat4::Identity()), kTol);
}

TEST(CzUnitary, MatchesEigendecompositionOfSummedGenerator) {
  const Eigen::Matrix2d z{{1, 0}, {0, -1}};
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix4d zi = Eigen::kroneckerProduct(z, id);
  const Eigen::Matrix4d iz = Eigen::kroneckerProduct(id, z);
  const Eigen::Matrix4d zz = Eigen::kroneckerProduct(z, z);

  const CzModelParams p{kPi / 2, kPi / 2, -kPi / 2 + 0.1};
  const Eigen::Matrix4d h = p.theta_zi * zi + p.theta_iz * iz + p.theta_zz * zz;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(h);
  Mat4 phases = Mat4::Zero();
  for (int j = 0; j < 4; ++j) phases(j, j) = std::polar(1.0, -0.5 * eig.eigenvalues()(j));
  const Mat4 v = eig.eigenvectors().cast<Complex>();
  const Mat4 expected = v * phases * v.adjoint();

  const Mat4 u = build_cz_unitary(p);
  EXPECT_LE(max_abs_deviation(u, expected), kTol);

  // The |11> vs |10> relative phase moves by 0.1 away from the ideal pi.
  const double rel = std::arg(u(3, 3) / u(2, 2));
  const double rel_ideal = std::arg(Complex(-1.0, 0.0));
  EXPECT_NEAR(std::abs(oracle::circle_distance(rel, rel_ideal)), 0.1, 1e-12);
}

TEST(CzUnitary, IsUnitaryAndDiagonal) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Mat4 u = build_cz_unitary(random_params(rng));
    EXPECT_LE(max_abs_deviation(u.adjoint() * u, Mat4::Identity()), kTol);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (r != c) {
          EXPECT_EQ(u(r, c), Complex(0.0));
        }
      }
    }
  }
}

TEST(OneQubitGates, RyHalfPiMakesPlusState) {
  const Mat2 ry = build_1q_gate(GateKind::kRy, kPi / 2);
  const Eigen::Vector2cd out = ry * Eigen::Vector2cd(1, 0);
  EXPECT_NEAR(std::abs(out(0) - 1 / std::sqrt(2.0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(out(1) - 1 / std::sqrt(2.0)), 0.0, kTol);
}

TEST(OneQubitGates, InversePairsAndInvolution) {
  const Mat2 a = build_1q_gate(GateKind::kRx, -kPi / 2) * build_1q_gate(GateKind::kRx, kPi / 2);
  EXPECT_LE((a - Mat2::Identity()).cwiseAbs().maxCoeff(), kTol);
  const Mat2 x = build_1q_gate(GateKind::kX);
  EXPECT_LE((x * x - Mat2::Identity()).cwiseAbs().maxCoeff(), kTol);
  // X equals Rx(pi) up to a global phase of -i.
  const Mat2 rx_pi = build_1q_gate(GateKind::kRx, kPi);
  EXPECT_LE((rx_pi - Complex(0, -1) * x).cwiseAbs().maxCoeff(), kTol);
}

TEST(OneQubitGates, RejectsCz) {
  EXPECT_THROW(build_1q_gate(GateKind::kCz), std::invalid_argument);
}

TEST(ApplyCircuit, EmptyCircuitIsGroundState) {
  const DensityMatrix rho = apply_circuit({}, NoiseModel::ideal(), CzModelParams::targets());
  EXPECT_LE(max_abs_deviation(rho, diag4(1, 0, 0, 0)), kTol);
}

TEST(ApplyCircuit, CzLeavesGroundStateInvariant) {
  CircuitSpec c;
  c.layers = {{Gate::cz()}};
  const DensityMatrix rho = apply_circuit(c, NoiseModel::ideal(), CzModelParams::targets());
  EXPECT_LE(max_abs_deviation(rho, diag4(1, 0, 0, 0)), kTol);
}

TEST(ApplyCircuit, TwoCzsRotateQubitBByTwicePhi0001) {
  const Mat2 px{{0, 1}, {1, 0}};
  const Mat4 x_b = embed(px, Qubit::kB);
  for (const CzModelParams& p : {CzModelParams::targets(), CzModelParams{1.7, 1.3, -1.45}}) {
    CircuitSpec c;
    c.layers = {{Gate::ry(Qubit::kB, kPi / 2)}, {Gate::cz()}, {Gate::cz()}};
    const DensityMatrix rho = apply_circuit(c, NoiseModel::ideal(), p);
    const double x = (rho * x_b).trace().real();

    const oracle::State psi = oracle::run(c, p);
    // <X_B> = 2 Re(conj(psi_00) psi_01) + 2 Re(conj(psi_10) psi_11)
    const double x_oracle = 2 * (std::conj(psi[0]) * psi[1] + std::conj(psi[2]) * psi[3]).real();
    EXPECT_NEAR(x, x_oracle, 1e-12);
    EXPECT_NEAR(x, std::cos(2 * (p.theta_iz + p.theta_zz)), 1e-12);
  }
}

TEST(ApplyCircuit, OutputIsValidStateUnderRandomNoise) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    NoiseModel noise;
    noise.depolarizing_rate_per_cz = rng.uniform();
    noise.depolarizing_rate_per_1q = rng.uniform();
    noise.prep_flip_prob = {rng.uniform(), rng.uniform()};
    noise.readout_confusion = {symmetric_flip(rng.uniform(0, 0.5)), symmetric_flip(rng.uniform(0, 0.5))};
    const DensityMatrix rho = apply_circuit(random_circuit(rng, 20), noise, random_params(rng));
    EXPECT_TRUE(is_valid_state(rho)) << "trial " << t;
  }
}

TEST(ApplyCircuit, AgreesWithStateVectorOracleWithoutNoise) {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const CircuitSpec c = random_circuit(rng, 20);
    const CzModelParams p = random_params(rng);
    const DensityMatrix rho = apply_circuit(c, NoiseModel::ideal(), p);
    const oracle::State psi = oracle::run(c, p);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = psi[static_cast<std::size_t>(i)];
    const double fidelity = (v.adjoint() * rho * v)(0, 0).real();
    EXPECT_GE(fidelity, 1 - 1e-10) << "circuit " << t << ": " << serialize(c);
  }
}

TEST(ApplyCircuit, RejectsMalformedCircuit) {
  CircuitSpec c;
  c.layers = {{Gate::rx(Qubit::kA, 0.1), Gate::ry(Qubit::kA, 0.2)}};
  EXPECT_THROW(apply_circuit(c, NoiseModel::ideal(), CzModelParams::targets()), InvalidCircuit);
  c.layers = {{Gate::cz(), Gate::x(Qubit::kB)}};
  EXPECT_THROW(apply_circuit(c, NoiseModel::ideal(), CzModelParams::targets()), InvalidCircuit);
  c.layers = {{Gate::rx(Qubit::kA, std::nan(""))}};
  EXPECT_THROW(apply_circuit(c, NoiseModel::ideal(), CzModelParams::targets()), InvalidCircuit);
}

TEST(Depolarizing, ContractsTracelessPartExactly) {
  Rng rng(5);
  const Mat4 mixed = Mat4::Identity() / 4.0;
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_state(rng);
    const double p = rng.uniform();
    const DensityMatrix out = depolarize_two_qubit(rho, p);
    EXPECT_NEAR((out - mixed).norm(), (1 - p) * (rho - mixed).norm(), 1e-14);
    EXPECT_TRUE(is_valid_state(out));
  }
}

TEST(Depolarizing, OneQubitFullRateTracesOutTheQubit) {
  Rng rng(6);
  const DensityMatrix rho = random_state(rng);
  const DensityMatrix out = depolarize_one_qubit(rho, 1.0, Qubit::kB);
  // Reduced state of A is unchanged and B is maximally mixed.
  for (int a = 0; a < 2; ++a) {
    for (int a2 = 0; a2 < 2; ++a2) {
      const Complex reduced = rho(2 * a, 2 * a2) + rho(2 * a + 1, 2 * a2 + 1);
      EXPECT_NEAR(std::abs(out(2 * a, 2 * a2) - reduced / 2.0), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(out(2 * a + 1, 2 * a2 + 1) - reduced / 2.0), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(out(2 * a, 2 * a2 + 1)), 0.0, 1e-14);
    }
  }
}

TEST(Preparation, IndependentBitFlips) {
  NoiseModel n;
  n.prep_flip_prob = {0.1, 0.3};
  const DensityMatrix rho = prepared_state(n);
  EXPECT_NEAR(rho(0, 0).real(), 0.9 * 0.7, kTol);
  EXPECT_NEAR(rho(1, 1).real(), 0.9 * 0.3, kTol);
  EXPECT_NEAR(rho(2, 2).real(), 0.1 * 0.7, kTol);
  EXPECT_NEAR(rho(3, 3).real(), 0.1 * 0.3, kTol);
}

TEST(Sampling, GroundStateIsDeterministic) {
  const ShotCounts c = sample_counts(diag4(1, 0, 0, 0), NoiseModel::ideal(), 100, 99);
  EXPECT_EQ(c[Outcome::k00], 100u);
  EXPECT_EQ(c.total(), 100u);
}

TEST(Sampling, MaximallyMixedIsUniformWithinThreeSigma) {
  const std::int64_t shots = 400000;
  const ShotCounts c = sample_counts(Mat4::Identity() / 4.0, NoiseModel::ideal(), shots, 3);
  const double sigma = std::sqrt(shots * 0.25 * 0.75);
  for (Outcome o : kAllOutcomes) EXPECT_NEAR(static_cast<double>(c[o]), shots / 4.0, 3 * sigma);
}

TEST(Sampling, SymmetricReadoutFlipMatchesConfusionProduct) {
  NoiseModel n;
  n.readout_confusion = {symmetric_flip(0.05), symmetric_flip(0.05)};
  const OutcomeProbabilities p = outcome_probabilities(diag4(1, 0, 0, 0), n);

  // Oracle: explicit 4x4 product of the two confusion matrices applied to (1,0,0,0).
  const Eigen::Matrix2d c{{0.95, 0.05}, {0.05, 0.95}};
  const Eigen::Matrix4d full = Eigen::kroneckerProduct(c, c);
  const Eigen::Vector4d expected = full.transpose() * Eigen::Vector4d(1, 0, 0, 0);
  const double literal[4] = {0.9025, 0.0475, 0.0475, 0.0025};
  for (int o = 0; o < 4; ++o) {
    EXPECT_NEAR(p[static_cast<std::size_t>(o)], expected(o), 1e-15);
    EXPECT_NEAR(p[static_cast<std::size_t>(o)], literal[o], 1e-15);
  }
}

TEST(Sampling, AsymmetricConfusionUsesRowsAsPreparedBit) {
  NoiseModel n;
  n.readout_confusion[0] = {{{1.0, 0.0}, {0.2, 0.8}}};  // A: 1 read as 0 with prob 0.2
  const OutcomeProbabilities p = outcome_probabilities(diag4(0, 0, 1, 0), n);
  EXPECT_NEAR(p[0], 0.2, kTol);
  EXPECT_NEAR(p[2], 0.8, kTol);
}

TEST(Sampling, PureFunctionOfInputs) {
  Rng rng(8);
  const DensityMatrix rho = random_state(rng);
  NoiseModel n;
  n.readout_confusion = {symmetric_flip(0.03), symmetric_flip(0.07)};
  const ShotCounts a = sample_counts(rho, n, 1000, 42);
  const ShotCounts b = sample_counts(rho, n, 1000, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, sample_counts(rho, n, 1000, 43));
  EXPECT_EQ(a.total(), 1000u);
}

TEST(Sampling, RejectsBadInput) {
  EXPECT_THROW(sample_counts(diag4(1, 0, 0, 0), NoiseModel::ideal(), 0, 1), std::invalid_argument);
  EXPECT_THROW(sample_counts(diag4(1.1, -0.1, 0, 0), NoiseModel::ideal(), 10, 1), InvariantViolation);
}

TEST(NoiseModelValidation, RejectsOutOfRange) {
  NoiseModel n;
  EXPECT_NO_THROW(validate(n));
  n.depolarizing_rate_per_cz = 1.5;
  EXPECT_THROW(validate(n), ConfigError);
  n = {};
  n.prep_flip_prob[1] = -0.1;
  EXPECT_THROW(validate(n), ConfigError);
  n = {};
  n.readout_confusion[0] = {{{0.9, 0.2}, {0.0, 1.0}}};
  EXPECT_THROW(validate(n), ConfigError);
}

}  // namespace
}  // namespace czcal
