#pragma once

// Population-based search strategies over the 2-D control space.

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "czcal/random.hpp"
#include "czcal/surrogate.hpp"

namespace czcal {

// Axis-aligned box [center - half, center + half].
struct SearchWindow {
  ControlPoint center;
  double amp_half_width = 0.0;
  double freq_half_width = 0.0;

  friend bool operator==(const SearchWindow&, const SearchWindow&) = default;
};

enum class StrategyKind { kRankShrink, kCmaEs };

std::string_view strategy_name(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

// ask() proposes one population; tell() reports the costs of exactly that
// population (+inf for failed evaluations, at least one finite).
class SearchStrategy {
 public:
  virtual ~SearchStrategy() = default;
  virtual std::vector<ControlPoint> ask(Rng& rng) = 0;
  virtual void tell(std::span<const ControlPoint> points, std::span<const double> costs) = 0;
  // Current sampling region, for logging.
  virtual SearchWindow window() const = 0;
};

// (mu, lambda) evolution strategy: uniform samples in the window, recentering
// on the log-rank-weighted mean of the best half and a multiplicative shrink
// of both half-widths per generation.
class RankShrinkStrategy final : public SearchStrategy {
 public:
  RankShrinkStrategy(SearchWindow initial, int population, double shrink);

  std::vector<ControlPoint> ask(Rng& rng) override;
  void tell(std::span<const ControlPoint> points, std::span<const double> costs) override;
  SearchWindow window() const override { return window_; }

 private:
  SearchWindow window_;
  int population_;
  double shrink_;
};

// Compact (mu/mu_w, lambda)-CMA-ES with step-size and rank-one/rank-mu
// covariance updates, run in coordinates scaled by the initial half-widths.
class CmaEsStrategy final : public SearchStrategy {
 public:
  CmaEsStrategy(SearchWindow initial, int population);

  std::vector<ControlPoint> ask(Rng& rng) override;
  void tell(std::span<const ControlPoint> points, std::span<const double> costs) override;
  SearchWindow window() const override;

 private:
  Eigen::Vector2d to_unit(const ControlPoint& p) const;
  ControlPoint from_unit(const Eigen::Vector2d& y) const;

  Eigen::Vector2d scale_;
  Eigen::Vector2d mean_;
  double sigma_ = 0.5;
  Eigen::Matrix2d cov_ = Eigen::Matrix2d::Identity();
  Eigen::Vector2d path_sigma_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d path_cov_ = Eigen::Vector2d::Zero();
  int population_;
  int mu_;
  std::vector<double> weights_;
  double mu_eff_ = 1.0;
  double c_sigma_ = 0.0, d_sigma_ = 0.0, c_c_ = 0.0, c_1_ = 0.0, c_mu_ = 0.0;
  double chi_n_ = 0.0;
  int generation_ = 0;
};

std::unique_ptr<SearchStrategy> make_strategy(StrategyKind kind, const SearchWindow& initial,
                                              int population, double shrink);

}  // namespace czcal
