#include "czcal/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace czcal {
namespace {

// Indices of finite costs, best first; ties keep population order.
std::vector<std::size_t> ranked_finite(std::span<const double> costs) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (std::isfinite(costs[i])) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  return idx;
}

std::vector<double> log_rank_weights(int mu) {
  std::vector<double> w(static_cast<std::size_t>(mu));
  for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

void check_tell(std::span<const ControlPoint> points, std::span<const double> costs) {
  if (points.size() != costs.size()) throw std::invalid_argument("tell: size mismatch");
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
  return kind == StrategyKind::kCmaEs ? "cmaes" : "rank_shrink";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "rank_shrink") return StrategyKind::kRankShrink;
  if (name == "cmaes") return StrategyKind::kCmaEs;
  throw std::invalid_argument("unknown optimizer strategy '" + std::string(name) + "'");
}

// ---- RankShrinkStrategy ----------------------------------------------------

RankShrinkStrategy::RankShrinkStrategy(SearchWindow initial, int population, double shrink)
    : window_(initial), population_(population), shrink_(shrink) {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (!(shrink > 0.0 && shrink <= 1.0)) throw std::invalid_argument("shrink must lie in (0, 1]");
}

std::vector<ControlPoint> RankShrinkStrategy::ask(Rng& rng) {
  std::vector<ControlPoint> out;
  out.reserve(static_cast<std::size_t>(population_));
  for (int i = 0; i < population_; ++i) {
    const double a = window_.center.amplitude + window_.amp_half_width * rng.uniform(-1.0, 1.0);
    const double f = window_.center.frequency + window_.freq_half_width * rng.uniform(-1.0, 1.0);
    out.push_back({std::max(a, 0.0), f});
  }
  return out;
}

void RankShrinkStrategy::tell(std::span<const ControlPoint> points, std::span<const double> costs) {
  check_tell(points, costs);
  const std::vector<std::size_t> ranked = ranked_finite(costs);
  if (ranked.empty()) return;
  const int mu = std::max(1, std::min(static_cast<int>(ranked.size()), population_ / 2));
  const std::vector<double> w = log_rank_weights(mu);
  ControlPoint center{0.0, 0.0};
  for (int i = 0; i < mu; ++i) {
    center.amplitude += w[i] * points[ranked[i]].amplitude;
    center.frequency += w[i] * points[ranked[i]].frequency;
  }
  window_.center = center;
  window_.amp_half_width *= shrink_;
  window_.freq_half_width *= shrink_;
}

// ---- CmaEsStrategy ---------------------------------------------------------

CmaEsStrategy::CmaEsStrategy(SearchWindow initial, int population) : population_(population) {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (initial.amp_half_width <= 0.0 || initial.freq_half_width <= 0.0) {
    throw std::invalid_argument("cmaes needs a window with positive extent on both axes");
  }
  scale_ = {initial.amp_half_width, initial.freq_half_width};
  mean_ = to_unit(initial.center);

  constexpr double n = 2.0;
  mu_ = population_ / 2;
  weights_ = log_rank_weights(mu_);
  double sq = 0.0;
  for (double w : weights_) sq += w * w;
  mu_eff_ = 1.0 / sq;
  c_sigma_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 5.0);
  d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) + c_sigma_;
  c_c_ = (4.0 + mu_eff_ / n) / (n + 4.0 + 2.0 * mu_eff_ / n);
  c_1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) / ((n + 2.0) * (n + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
}

Eigen::Vector2d CmaEsStrategy::to_unit(const ControlPoint& p) const {
  return {p.amplitude / scale_(0), p.frequency / scale_(1)};
}

ControlPoint CmaEsStrategy::from_unit(const Eigen::Vector2d& y) const {
  return {y(0) * scale_(0), y(1) * scale_(1)};
}

std::vector<ControlPoint> CmaEsStrategy::ask(Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov_);
  const Eigen::Matrix2d bd =
      eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::vector<ControlPoint> out;
  out.reserve(static_cast<std::size_t>(population_));
  for (int i = 0; i < population_; ++i) {
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    ControlPoint p = from_unit(mean_ + sigma_ * bd * Eigen::Vector2d(z0, z1));
    p.amplitude = std::max(p.amplitude, 0.0);
    out.push_back(p);
  }
  return out;
}

void CmaEsStrategy::tell(std::span<const ControlPoint> points, std::span<const double> costs) {
  check_tell(points, costs);
  const std::vector<std::size_t> ranked = ranked_finite(costs);
  if (ranked.empty()) return;
  const int mu = std::min(mu_, static_cast<int>(ranked.size()));
  std::vector<double> w(weights_.begin(), weights_.begin() + mu);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= wsum;

  const Eigen::Vector2d old_mean = mean_;
  std::vector<Eigen::Vector2d> steps;
  Eigen::Vector2d y_w = Eigen::Vector2d::Zero();
  for (int i = 0; i < mu; ++i) {
    steps.push_back((to_unit(points[ranked[i]]) - old_mean) / sigma_);
    y_w += w[i] * steps.back();
  }
  mean_ = old_mean + sigma_ * y_w;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov_);
  const Eigen::Matrix2d inv_sqrt = eig.eigenvectors() *
                                   eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                                   eig.eigenvectors().transpose();
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * inv_sqrt * y_w;
  ++generation_;
  const double norm_ps = path_sigma_.norm();
  const bool h_sigma =
      norm_ps / std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_)) < (1.4 + 2.0 / 3.0) * chi_n_;
  path_cov_ = (1.0 - c_c_) * path_cov_ +
              (h_sigma ? std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) : 0.0) * y_w;

  Eigen::Matrix2d rank_mu = Eigen::Matrix2d::Zero();
  for (int i = 0; i < mu; ++i) rank_mu += w[i] * steps[i] * steps[i].transpose();
  cov_ = (1.0 - c_1_ - c_mu_) * cov_ +
         c_1_ * (path_cov_ * path_cov_.transpose() + (h_sigma ? 0.0 : c_c_ * (2.0 - c_c_)) * cov_) +
         c_mu_ * rank_mu;
  cov_ = 0.5 * (cov_ + cov_.transpose());
  sigma_ *= std::exp((c_sigma_ / d_sigma_) * (norm_ps / chi_n_ - 1.0));
}

SearchWindow CmaEsStrategy::window() const {
  SearchWindow w;
  w.center = from_unit(mean_);
  w.amp_half_width = 2.0 * sigma_ * std::sqrt(cov_(0, 0)) * scale_(0);
  w.freq_half_width = 2.0 * sigma_ * std::sqrt(cov_(1, 1)) * scale_(1);
  return w;
}

std::unique_ptr<SearchStrategy> make_strategy(StrategyKind kind, const SearchWindow& initial,
                                              int population, double shrink) {
  if (kind == StrategyKind::kCmaEs) return std::make_unique<CmaEsStrategy>(initial, population);
  return std::make_unique<RankShrinkStrategy>(initial, population, shrink);
}

}  // namespace czcal
