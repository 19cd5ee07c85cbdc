#pragma once

// Gate-agnostic robust phase estimation: post-selected I/Q expectations,
// per-generation estimates with branch unwinding, and the angular-historical
// consistency check that decides how many generations are trusted.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "czcal/circuit.hpp"
#include "czcal/sim_core.hpp"

namespace czcal::rpe {

struct PostSelected {
  double value = 0.0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
  std::uint64_t n_discarded = 0;

  friend bool operator==(const PostSelected&, const PostSelected&) = default;
};

// (N+ - N-)/(N+ + N-). Outcomes in neither set are discarded.
// Throws AllShotsDiscarded when N+ + N- == 0 and std::invalid_argument when
// the sets overlap.
PostSelected post_selected_expectation(const ShotCounts& counts, OutcomeSet plus, OutcomeSet minus);

// Same ratio on an outcome distribution (infinite-shot limit); counts are zero.
PostSelected post_selected_expectation(const OutcomeProbabilities& probs, OutcomeSet plus,
                                       OutcomeSet minus);

// Post-selected <I> and <Q> at depth 2^k. In exact-expectation mode the
// count fields are all zero.
struct IQMeasurement {
  int k = 0;
  double i_value = 0.0;
  double q_value = 0.0;
  PostSelected i_counts;
  PostSelected q_counts;

  static IQMeasurement from_counts(int k, const PostSelected& i, const PostSelected& q) {
    return {k, i.value, q.value, i, q};
  }
  static IQMeasurement exact(int k, double i, double q) { return {k, i, q, {i}, {q}}; }

  friend bool operator==(const IQMeasurement&, const IQMeasurement&) = default;
};

struct GenerationEstimate {
  int k = 0;
  double phi_hat = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool trusted = false;
  std::int64_t n_k = 0;

  friend bool operator==(const GenerationEstimate&, const GenerationEstimate&) = default;
};

// atan2 mapped from (-pi, pi] onto (0, 2pi]: nonpositive results gain 2pi,
// so angle 0 maps to 2pi. Throws DegenerateAngle for (0, 0).
double wrapped_arctan2(double q, double i);

// Signed angular difference wrapped to (-pi, pi].
double angular_difference(double a, double b);

// Half-width of the generation-k trust window: pi / (3 * 2^(k+1)).
double window_half_width(int k);

// RMS error bound at generation k: pi / 2^(k+1).
double rms_bound(int k);

// Branch index for generation k >= 1:
//   n_k = floor(((prev - z_k/2^k + pi/2^k) mod 2pi) / (2pi/2^k)),
// i.e. the branch whose estimate (z_k + 2pi n)/2^k is nearest `prev_estimate`.
std::int64_t unwinding_integer(double prev_estimate, double z_k, int k);

struct EstimatorOptions {
  // Branch used at generation 0; zero for standard gates.
  std::int64_t n0 = 0;
};

// Measurements must be sorted by k, start at 0 and have no gaps (throws
// std::invalid_argument otherwise, including for empty input). The first
// generation that falls outside the intersection of all earlier trusted
// windows, and every later one, is marked untrusted; later estimates are
// still chained from their predecessor for diagnostics. A generation k > 0
// with i = q = 0 is untrusted; at k = 0 it throws DegenerateAngle.
std::vector<GenerationEstimate> estimate_generations(std::span<const IQMeasurement> measurements,
                                                     const EstimatorOptions& options = {});

struct TrustedEstimate {
  double phi = 0.0;
  int k_last = 0;
};

// Highest-k trusted generation. Generation 0 is always trusted.
TrustedEstimate last_trusted_estimate(std::span<const GenerationEstimate> estimates);

// (|i - cos(2^k phi)| / 2, |q - sin(2^k phi)| / 2); robustness holds while
// both stay below sqrt(3/32).
std::pair<double, double> robustness_margin(double i_value, double q_value, double true_phase,
                                            int k);

inline constexpr double kRobustnessThreshold = 0.30618621784789724;  // sqrt(3/32)

}  // namespace czcal::rpe
