#include "czcal/calibration.hpp"

#include <cmath>

#include "czcal/random.hpp"

namespace czcal {

double zz_cost(const CzModelParams& estimated) { return std::abs(estimated.theta_zz + kPi / 2); }

Evaluation evaluate_cost(const ControlPoint& point, const Backend& backend, const RpeConfig& rpe,
                         std::uint64_t seed, ExecPolicy policy) {
  CzRpeResult result;
  try {
    result = run_cz_rpe(backend, point, {}, rpe, seed, policy);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(point, e.what());
  }
  Evaluation ev;
  ev.record.point = point;
  ev.record.estimated = result.estimated;
  ev.record.cost = zz_cost(result.estimated);
  ev.record.k_last = result.k_last;
  ev.rpe = std::move(result);
  return ev;
}

void validate(const OptimizerConfig& c) {
  if (c.population < 2) throw ConfigError("optimizer.population must be >= 2");
  if (c.max_iterations < 1) throw ConfigError("optimizer.max_iterations must be >= 1");
  const SearchWindow& w = c.initial_window;
  if (!std::isfinite(w.center.amplitude) || !std::isfinite(w.center.frequency) ||
      !std::isfinite(w.amp_half_width) || !std::isfinite(w.freq_half_width)) {
    throw ConfigError("optimizer.initial_window must be finite");
  }
  if (w.amp_half_width < 0.0 || w.freq_half_width < 0.0 ||
      (w.amp_half_width == 0.0 && w.freq_half_width == 0.0)) {
    throw ConfigError("optimizer.initial_window must be nonempty");
  }
  if (std::isnan(c.convergence_cost) || c.convergence_cost < 0.0) {
    throw ConfigError("optimizer.convergence_cost must be >= 0");
  }
  if (!(c.shrink > 0.0 && c.shrink <= 1.0)) throw ConfigError("optimizer.shrink must lie in (0, 1]");
}

OptimizationResult optimize(const Backend& backend, const OptimizerConfig& config,
                            const RpeConfig& rpe, std::uint64_t backend_seed, ExecPolicy policy,
                            const EvaluationObserver& observer) {
  validate(config);
  validate(rpe);
  std::unique_ptr<SearchStrategy> strategy =
      make_strategy(config.strategy, config.initial_window, config.population, config.shrink);
  Rng rng(config.seed);

  OptimizationResult result;
  bool have_best = false;
  for (int it = 0; it < config.max_iterations; ++it) {
    result.windows.push_back(strategy->window());
    const std::vector<ControlPoint> candidates = strategy->ask(rng);
    std::vector<Evaluation> evals(candidates.size());

    for_each_index(candidates.size(), policy, [&](std::size_t c) {
      const std::uint64_t seed =
          derive_seed(backend_seed, {static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(c)});
      try {
        evals[c] = evaluate_cost(candidates[c], backend, rpe, seed, ExecPolicy::kSerial);
      } catch (const EvaluationError& e) {
        evals[c].record.point = candidates[c];
        evals[c].record.failure = e.what();
      }
      evals[c].record.iteration = it;
      evals[c].record.candidate = static_cast<int>(c);
    });

    std::vector<double> costs;
    costs.reserve(evals.size());
    bool any_ok = false;
    for (const Evaluation& ev : evals) {
      if (observer) observer(ev);
      result.history.push_back(ev.record);
      costs.push_back(ev.record.cost);
      if (ev.record.failed()) continue;
      any_ok = true;
      if (!have_best || ev.record.cost < result.best.cost) {
        result.best = ev.record;
        have_best = true;
      }
    }
    if (!any_ok) {
      throw Error("optimize: all " + std::to_string(evals.size()) + " evaluations failed in iteration " +
                  std::to_string(it) + "; last error: " + evals.back().record.failure.value_or(""));
    }
    strategy->tell(candidates, costs);
    if (result.best.cost <= config.convergence_cost) break;
  }
  return result;
}

namespace {

AngleReport to_angle_report(const CzRpeResult& r) {
  return {r.estimated, r.windows(), r.k_last};
}

}  // namespace

CalibrationReport finalize_calibration(const CostRecord& best, const Backend& backend,
                                       const RpeConfig& rpe, std::uint64_t seed,
                                       const EvaluationObserver& observer) {
  CalibrationReport report;
  report.point = best.point;

  auto run = [&](const VirtualZ& vz, int index) {
    CzRpeResult r = run_cz_rpe(backend, best.point, vz, rpe,
                               derive_seed(seed, {static_cast<std::uint64_t>(index)}));
    if (observer) {
      Evaluation ev;
      ev.record = {best.point, r.estimated, zz_cost(r.estimated), r.k_last, -1, index, std::nullopt};
      ev.rpe = r;
      observer(ev);
    }
    return r;
  };

  const CzRpeResult before = run({}, 0);
  report.before = to_angle_report(before);
  report.correction = virtual_z_correction(before.estimated);
  report.after = to_angle_report(run(report.correction, 1));
  return report;
}

}  // namespace czcal
