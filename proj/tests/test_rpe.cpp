#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "czcal/error.hpp"
#include "czcal/random.hpp"
#include "czcal/rpe.hpp"
#include "oracle.hpp"

namespace czcal::rpe {
namespace {

ShotCounts counts(std::uint64_t c00, std::uint64_t c01, std::uint64_t c10, std::uint64_t c11) {
  return ShotCounts{{c00, c01, c10, c11}};
}

const OutcomeSet kPlus{Outcome::k00};
const OutcomeSet kMinus{Outcome::k01};

std::vector<IQMeasurement> exact_measurements(double phi, int k_max) {
  std::vector<IQMeasurement> out;
  for (int k = 0; k <= k_max; ++k) {
    const double arg = std::ldexp(phi, k);
    out.push_back(IQMeasurement::exact(k, std::cos(arg), std::sin(arg)));
  }
  return out;
}

TEST(PostSelection, DirectRatio) {
  const PostSelected p = post_selected_expectation(counts(60, 40, 0, 0), kPlus, kMinus);
  EXPECT_DOUBLE_EQ(p.value, 0.2);
  EXPECT_EQ(p.n_plus, 60u);
  EXPECT_EQ(p.n_minus, 40u);
  EXPECT_EQ(p.n_discarded, 0u);
}

TEST(PostSelection, BalancedWithDiscards) {
  const PostSelected p = post_selected_expectation(counts(50, 50, 7, 3), kPlus, kMinus);
  EXPECT_EQ(p.value, 0.0);
  EXPECT_EQ(p.n_plus, 50u);
  EXPECT_EQ(p.n_minus, 50u);
  EXPECT_EQ(p.n_discarded, 10u);
}

TEST(PostSelection, AllDiscardedThrows) {
  try {
    post_selected_expectation(counts(0, 0, 5, 5), kPlus, kMinus);
    FAIL() << "expected AllShotsDiscarded";
  } catch (const AllShotsDiscarded& e) {
    EXPECT_STREQ(e.what(), "all shots discarded");
  }
}

TEST(PostSelection, OverlappingSetsRejected) {
  EXPECT_THROW(post_selected_expectation(counts(1, 1, 1, 1), kPlus, OutcomeSet{Outcome::k00}),
               std::invalid_argument);
}

TEST(PostSelection, InvariantUnderScalingCounts) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    ShotCounts c;
    for (auto& n : c.counts) n = 1 + rng.next() % 500;
    const std::uint64_t factor = 1 + rng.next() % 9;
    ShotCounts scaled = c;
    for (auto& n : scaled.counts) n *= factor;
    const OutcomeSet plus{Outcome::k01};
    const OutcomeSet minus{Outcome::k00, Outcome::k11};
    EXPECT_EQ(post_selected_expectation(c, plus, minus).value,
              post_selected_expectation(scaled, plus, minus).value);
  }
}

TEST(WrappedArctan2, RangeConvention) {
  EXPECT_DOUBLE_EQ(wrapped_arctan2(0.0, 1.0), 2 * kPi);
  EXPECT_DOUBLE_EQ(wrapped_arctan2(1.0, 0.0), kPi / 2);
  EXPECT_DOUBLE_EQ(wrapped_arctan2(-std::sqrt(0.5), -std::sqrt(0.5)), 5 * kPi / 4);
  EXPECT_DOUBLE_EQ(wrapped_arctan2(0.0, -1.0), kPi);
  EXPECT_THROW(wrapped_arctan2(0.0, 0.0), DegenerateAngle);
}

TEST(WrappedArctan2, AlwaysInHalfOpenInterval) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const double phi = wrapped_arctan2(rng.normal(), rng.normal());
    EXPECT_GT(phi, 0.0);
    EXPECT_LE(phi, 2 * kPi);
  }
}

TEST(Unwinding, ExactMatchAtKOne) { EXPECT_EQ(unwinding_integer(0.1, 0.2, 1), 0); }

TEST(Unwinding, AlreadyAlignedAtKThree) {
  const double prev = 0.3;
  const double z = prev * 8;
  const std::int64_t n = unwinding_integer(prev, z, 3);
  EXPECT_EQ(n, oracle::nearest_branch(prev, z, 3));
  EXPECT_EQ(n, 0);
  EXPECT_LE(std::abs((z + 2 * kPi * static_cast<double>(n)) / 8 - prev), kPi / 8);
}

TEST(Unwinding, AgreesWithExhaustiveSearch) {
  Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    const double prev = rng.uniform(0.0, 2 * kPi);
    const double z = 2 * kPi - rng.uniform() * 2 * kPi;  // (0, 2pi]
    const int k = 1 + static_cast<int>(rng.next() % 8);
    EXPECT_EQ(unwinding_integer(prev, z, k), oracle::nearest_branch(prev, z, k))
        << "prev=" << prev << " z=" << z << " k=" << k;
  }
}

TEST(Unwinding, BranchIndexInRange) {
  Rng rng(12);
  for (int t = 0; t < 2000; ++t) {
    const int k = 1 + static_cast<int>(rng.next() % 12);
    const std::int64_t n = unwinding_integer(rng.uniform(-10, 10), rng.uniform(0, 2 * kPi), k);
    EXPECT_GE(n, 0);
    EXPECT_LT(n, std::int64_t{1} << k);
  }
}

TEST(EstimateGenerations, NoiselessPhaseConvergesWithAllTrusted) {
  const auto est = estimate_generations(exact_measurements(1.234, 6));
  ASSERT_EQ(est.size(), 7u);
  for (const GenerationEstimate& g : est) EXPECT_TRUE(g.trusted) << "k=" << g.k;
  const TrustedEstimate t = last_trusted_estimate(est);
  EXPECT_EQ(t.k_last, 6);
  EXPECT_LE(std::abs(t.phi - 1.234), kPi / 128);
}

TEST(EstimateGenerations, AdversarialGenerationIsRejected) {
  auto m = exact_measurements(1.0, 3);
  m.push_back(IQMeasurement::exact(4, -std::cos(16.0), -std::sin(16.0)));
  const auto est = estimate_generations(m);
  for (int k = 0; k <= 3; ++k) EXPECT_TRUE(est[static_cast<std::size_t>(k)].trusted);
  EXPECT_FALSE(est[4].trusted);
  // Manual window check: the k=4 estimate sits pi/16 from 1.0, the k=3
  // window reaches only pi/48 from it.
  EXPECT_NEAR(oracle::circle_distance(est[4].phi_hat, 1.0), kPi / 16, 1e-12);
  const TrustedEstimate t = last_trusted_estimate(est);
  EXPECT_EQ(t.k_last, 3);
  EXPECT_EQ(t.phi, est[3].phi_hat);
}

TEST(EstimateGenerations, SingleGeneration) {
  const auto est = estimate_generations(std::vector{IQMeasurement::exact(0, std::cos(0.5), std::sin(0.5))});
  ASSERT_EQ(est.size(), 1u);
  EXPECT_NEAR(est[0].phi_hat, 0.5, 1e-15);
  EXPECT_TRUE(est[0].trusted);
  EXPECT_EQ(last_trusted_estimate(est).k_last, 0);
}

TEST(EstimateGenerations, RejectsMalformedInput) {
  EXPECT_THROW(estimate_generations(std::vector<IQMeasurement>{}), std::invalid_argument);
  std::vector<IQMeasurement> gap{IQMeasurement::exact(0, 1, 0), IQMeasurement::exact(2, 1, 0)};
  EXPECT_THROW(estimate_generations(gap), std::invalid_argument);
  std::vector<IQMeasurement> late{IQMeasurement::exact(1, 1, 0)};
  EXPECT_THROW(estimate_generations(late), std::invalid_argument);
}

TEST(EstimateGenerations, WindowGeometry) {
  const auto est = estimate_generations(exact_measurements(4.0, 8));
  for (const GenerationEstimate& g : est) {
    EXPECT_NEAR(g.window_hi - g.window_lo, 2 * kPi / 3 / std::ldexp(1.0, g.k + 1), 1e-15);
    EXPECT_NEAR(0.5 * (g.window_lo + g.window_hi), g.phi_hat, 1e-15);
  }
}

TEST(EstimateGenerations, WrapsNearZero) {
  for (double phi : {1e-3, 2 * kPi - 1e-3}) {
    const auto est = estimate_generations(exact_measurements(phi, 8));
    EXPECT_EQ(last_trusted_estimate(est).k_last, 8) << phi;
    EXPECT_LE(oracle::circle_distance(last_trusted_estimate(est).phi, phi), 1e-12);
  }
}

TEST(EstimateGenerations, HeisenbergBoundOnRandomPhases) {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const double phi = rng.uniform(0.0, 2 * kPi);
    const auto est = estimate_generations(exact_measurements(phi, 8));
    for (const GenerationEstimate& g : est) {
      EXPECT_LE(oracle::circle_distance(g.phi_hat, phi), rms_bound(g.k)) << "phi=" << phi;
      EXPECT_TRUE(g.trusted);
    }
  }
}

TEST(EstimateGenerations, ShiftEquivariance) {
  Rng rng(78);
  for (int t = 0; t < 100; ++t) {
    const double phi = rng.uniform(0.0, 2 * kPi);
    const double delta = rng.uniform(-1.0, 1.0);
    const auto a = estimate_generations(exact_measurements(phi, 8));
    const auto b = estimate_generations(exact_measurements(phi + delta, 8));
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_LE(oracle::circle_distance(b[k].phi_hat, a[k].phi_hat + delta), 1e-9);
    }
  }
}

TEST(EstimateGenerations, TrustedGenerationsFormPrefix) {
  Rng rng(79);
  for (int t = 0; t < 500; ++t) {
    const double phi = rng.uniform(0.0, 2 * kPi);
    const double noise = rng.uniform(0.0, 0.8);
    std::vector<IQMeasurement> m;
    for (int k = 0; k <= 8; ++k) {
      const double arg = std::ldexp(phi, k);
      m.push_back(IQMeasurement::exact(k, std::cos(arg) + noise * rng.normal(),
                                       std::sin(arg) + noise * rng.normal()));
    }
    const auto est = estimate_generations(m);
    bool seen_untrusted = false;
    for (const GenerationEstimate& g : est) {
      if (seen_untrusted) {
        EXPECT_FALSE(g.trusted);
      }
      seen_untrusted = seen_untrusted || !g.trusted;
    }
    EXPECT_TRUE(est[0].trusted);
  }
}

TEST(EstimateGenerations, BalancedOutcomePastZeroIsUntrusted) {
  auto m = exact_measurements(2.0, 2);
  m.push_back(IQMeasurement::exact(3, 0.0, 0.0));
  const auto est = estimate_generations(m);
  EXPECT_TRUE(est[2].trusted);
  EXPECT_FALSE(est[3].trusted);
  EXPECT_EQ(est[3].phi_hat, est[2].phi_hat);
  EXPECT_THROW(estimate_generations(std::vector{IQMeasurement::exact(0, 0.0, 0.0)}), DegenerateAngle);
}

TEST(EstimateGenerations, NonzeroStartingBranch) {
  // A phase above 2pi only shows up with n0 = 1.
  const double phi = 2 * kPi + 0.4;
  EstimatorOptions opts;
  opts.n0 = 1;
  const auto est = estimate_generations(exact_measurements(phi, 0), opts);
  EXPECT_NEAR(est[0].phi_hat, phi, 1e-12);
}

TEST(LastTrustedEstimate, Cases) {
  const auto all = estimate_generations(exact_measurements(0.7, 6));
  EXPECT_EQ(last_trusted_estimate(all).k_last, 6);
  EXPECT_EQ(last_trusted_estimate(all).phi, all[6].phi_hat);
  std::vector<GenerationEstimate> cut = all;
  for (std::size_t k = 4; k < cut.size(); ++k) cut[k].trusted = false;
  EXPECT_EQ(last_trusted_estimate(cut).k_last, 3);
  EXPECT_EQ(last_trusted_estimate(std::span(all).first(1)).k_last, 0);
  EXPECT_THROW(last_trusted_estimate(std::vector<GenerationEstimate>{}), std::invalid_argument);
}

TEST(RobustnessMargin, Cases) {
  const double phi = 0.9;
  const int k = 3;
  const double arg = 8 * phi;
  auto [a, b] = robustness_margin(std::cos(arg), std::sin(arg), phi, k);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
  std::tie(a, b) = robustness_margin(std::cos(arg) + 0.2, std::sin(arg), phi, k);
  EXPECT_NEAR(a, 0.1, 1e-15);
  EXPECT_EQ(b, 0.0);
  std::tie(a, b) = robustness_margin(0.0, 0.0, 0.0, k);
  EXPECT_EQ(a, 0.5);
  EXPECT_EQ(b, 0.0);
  EXPECT_GT(a, kRobustnessThreshold);
  EXPECT_NEAR(kRobustnessThreshold, std::sqrt(3.0 / 32.0), 1e-16);
}

}  // namespace
}  // namespace czcal::rpe
