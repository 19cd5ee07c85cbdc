#include "czcal/rpe.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "czcal/error.hpp"

namespace czcal::rpe {
namespace {

double depth(int k) { return std::ldexp(1.0, k); }

PostSelected ratio(double plus, double minus) {
  PostSelected out;
  out.value = (plus - minus) / (plus + minus);
  return out;
}

// Running intersection of trust windows, kept as an arc (center, half-width).
class WindowIntersection {
 public:
  WindowIntersection(double center, double half_width) : center_(center), half_(half_width) {}

  bool contains(double phi) const { return std::abs(angular_difference(phi, center_)) <= half_; }

  // Both arcs are shorter than pi, so unwrapping the new center next to the
  // running one turns this into an interval intersection on the line.
  void intersect(double center, double half_width) {
    const double c = center_ + angular_difference(center, center_);
    const double lo = std::max(center_ - half_, c - half_width);
    const double hi = std::min(center_ + half_, c + half_width);
    center_ = 0.5 * (lo + hi);
    half_ = 0.5 * (hi - lo);
  }

 private:
  double center_;
  double half_;
};

}  // namespace

PostSelected post_selected_expectation(const ShotCounts& counts, OutcomeSet plus, OutcomeSet minus) {
  if (!plus.disjoint(minus)) throw std::invalid_argument("plus and minus outcome sets overlap");
  PostSelected out;
  for (Outcome o : kAllOutcomes) {
    if (plus.contains(o)) {
      out.n_plus += counts[o];
    } else if (minus.contains(o)) {
      out.n_minus += counts[o];
    } else {
      out.n_discarded += counts[o];
    }
  }
  if (out.n_plus + out.n_minus == 0) throw AllShotsDiscarded();
  out.value = (static_cast<double>(out.n_plus) - static_cast<double>(out.n_minus)) /
              static_cast<double>(out.n_plus + out.n_minus);
  return out;
}

PostSelected post_selected_expectation(const OutcomeProbabilities& probs, OutcomeSet plus,
                                       OutcomeSet minus) {
  if (!plus.disjoint(minus)) throw std::invalid_argument("plus and minus outcome sets overlap");
  double p = 0.0;
  double m = 0.0;
  for (Outcome o : kAllOutcomes) {
    if (plus.contains(o)) p += probs[static_cast<int>(o)];
    if (minus.contains(o)) m += probs[static_cast<int>(o)];
  }
  if (p + m <= 0.0) throw AllShotsDiscarded();
  return ratio(p, m);
}

double wrapped_arctan2(double q, double i) {
  if (q == 0.0 && i == 0.0) throw DegenerateAngle();
  const double a = std::atan2(q, i);
  return a <= 0.0 ? a + kTwoPi : a;
}

double angular_difference(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

double window_half_width(int k) { return kPi / (3.0 * depth(k + 1)); }

double rms_bound(int k) { return kPi / depth(k + 1); }

std::int64_t unwinding_integer(double prev_estimate, double z_k, int k) {
  const double scale = depth(k);
  double shifted = std::fmod(prev_estimate - z_k / scale + kPi / scale, kTwoPi);
  if (shifted < 0.0) shifted += kTwoPi;
  auto n = static_cast<std::int64_t>(std::floor(shifted / (kTwoPi / scale)));
  // fmod can land on 2pi - ulp and round the quotient up to 2^k.
  const auto branches = static_cast<std::int64_t>(scale);
  return n >= branches ? n - branches : n;
}

std::vector<GenerationEstimate> estimate_generations(std::span<const IQMeasurement> measurements,
                                                     const EstimatorOptions& options) {
  if (measurements.empty()) throw std::invalid_argument("estimate_generations: no measurements");
  for (std::size_t j = 0; j < measurements.size(); ++j) {
    if (measurements[j].k != static_cast<int>(j)) {
      throw std::invalid_argument("estimate_generations: generations must be 0, 1, 2, ...");
    }
  }

  std::vector<GenerationEstimate> out;
  out.reserve(measurements.size());
  std::optional<WindowIntersection> window;
  bool trusted = true;
  double prev = 0.0;

  for (const IQMeasurement& m : measurements) {
    GenerationEstimate g;
    g.k = m.k;
    const double half = window_half_width(m.k);
    // A balanced (0, 0) outcome carries no phase; past generation 0 it fails
    // the consistency check and keeps its predecessor's estimate.
    const bool degenerate = m.k > 0 && m.i_value == 0.0 && m.q_value == 0.0;
    if (degenerate) {
      g.n_k = 0;
      g.phi_hat = prev;
    } else {
      const double z = wrapped_arctan2(m.q_value, m.i_value);
      g.n_k = m.k == 0 ? options.n0 : unwinding_integer(prev, z, m.k);
      g.phi_hat = (z + kTwoPi * static_cast<double>(g.n_k)) / depth(m.k);
    }
    g.window_lo = g.phi_hat - half;
    g.window_hi = g.phi_hat + half;

    if (trusted && window && (degenerate || !window->contains(g.phi_hat))) trusted = false;
    g.trusted = trusted;
    if (trusted) {
      if (window) {
        window->intersect(g.phi_hat, half);
      } else {
        window.emplace(g.phi_hat, half);
      }
    }
    prev = g.phi_hat;
    out.push_back(g);
  }
  return out;
}

TrustedEstimate last_trusted_estimate(std::span<const GenerationEstimate> estimates) {
  if (estimates.empty()) throw std::invalid_argument("last_trusted_estimate: no estimates");
  TrustedEstimate best{estimates.front().phi_hat, estimates.front().k};
  for (const GenerationEstimate& g : estimates) {
    if (!g.trusted) break;
    best = {g.phi_hat, g.k};
  }
  return best;
}

std::pair<double, double> robustness_margin(double i_value, double q_value, double true_phase,
                                            int k) {
  const double arg = depth(k) * true_phase;
  return {0.5 * std::abs(i_value - std::cos(arg)), 0.5 * std::abs(q_value - std::sin(arg))};
}

}  // namespace czcal::rpe
