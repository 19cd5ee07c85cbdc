#include "czcal/commands.hpp"

#include <fstream>

#include "czcal/error.hpp"

namespace czcal {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const char* name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + (dir / name).string());
  return out;
}

std::optional<std::string> stamp_if(const CommandOptions& options) {
  if (options.stamp) return utc_timestamp();
  return std::nullopt;
}

Json phase_summary(const CzRpeResult& r) {
  Json phases = Json::object();
  for (PhaseClass p : kAllPhaseClasses) {
    phases[std::string(phase_class_name(p))] = {{"phi", r.relative[p]}, {"k_last", r.phase_k_last(p)}};
  }
  return phases;
}

Json sweep_summary(const SweepResult& s) {
  return Json{{"points", s.points.size()},
              {"argmax", to_json(s.best().point)},
              {"conditionality", s.best().conditionality}};
}

}  // namespace

std::vector<ControlPoint> sweep_grid(const SweepConfig& s) {
  validate(s);
  return make_grid(s.amp_lo, s.amp_hi, s.amp_steps, s.freq_lo, s.freq_hi, s.freq_steps);
}

SweepResult cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  validate(config);
  const SurrogateBackend backend(config.surrogate);
  const std::vector<ControlPoint> grid = sweep_grid(config.sweep);
  SweepResult sweep = coarse_sweep(grid, backend, config.sweep.shots,
                                   derive_run_seeds(config.seed).sweep, ExpectationMode::kSampled,
                                   options.policy);
  std::ofstream csv = open_output(config.output_dir, "conditionality.csv");
  write_sweep_csv(csv, sweep);
  return sweep;
}

CzRpeResult cmd_rpe(const RunConfig& config, const std::optional<ControlPoint>& point,
                    const CommandOptions& options) {
  validate(config);
  const SurrogateBackend backend(config.surrogate);
  const ControlPoint at = point.value_or(
      ControlPoint{config.surrogate.amp_star, config.surrogate.freq_star});

  Evaluation ev = evaluate_cost(at, backend, config.rpe, derive_run_seeds(config.seed).rpe,
                                options.policy);
  const CzRpeResult& r = *ev.rpe;

  std::ofstream jsonl = open_output(config.output_dir, "rpe.jsonl");
  RunRecordWriter writer(jsonl);
  writer.header("rpe", config, stamp_if(options));
  writer.evaluation(ev, "rpe", {}, config.rpe);

  const AngleReport angles{r.estimated, r.windows(), r.k_last};
  std::ofstream summary = open_output(config.output_dir, "rpe_summary.json");
  summary << dump_json(Json{{"schema_version", kSchemaVersion},
                            {"point", to_json(at)},
                            {"phases", phase_summary(r)},
                            {"angles", to_json(angles)},
                            {"zz_cost", ev.record.cost}})
          << '\n';
  return *std::move(ev.rpe);
}

CalibrationOutcome cmd_calibrate(const RunConfig& config, const CommandOptions& options) {
  validate(config);
  const RunSeeds seeds = derive_run_seeds(config.seed);
  const SurrogateBackend backend(config.surrogate);
  CalibrationOutcome outcome;

  OptimizerConfig opt = config.optimizer;
  opt.seed = seeds.optimizer;
  if (config.window_from_sweep) {
    outcome.sweep = coarse_sweep(sweep_grid(config.sweep), backend, config.sweep.shots, seeds.sweep,
                                 ExpectationMode::kSampled, options.policy);
    opt.initial_window.center = outcome.sweep->best().point;
    std::ofstream csv = open_output(config.output_dir, "conditionality.csv");
    write_sweep_csv(csv, *outcome.sweep);
  }

  std::ofstream jsonl = open_output(config.output_dir, "calibration.jsonl");
  RunRecordWriter writer(jsonl);
  writer.header("calibrate", config, stamp_if(options));
  if (outcome.sweep) writer.line(Json{{"type", "report"}, {"sweep", sweep_summary(*outcome.sweep)}});

  // Rows are streamed so that an aborted run leaves its partial trajectory.
  std::ofstream trajectory = open_output(config.output_dir, "trajectory.csv");
  write_trajectory_header(trajectory);
  outcome.optimization = optimize(backend, opt, config.rpe, seeds.backend, options.policy,
                                  [&](const Evaluation& ev) {
                                    writer.evaluation(ev, "optimize", {}, config.rpe);
                                    write_trajectory_row(trajectory, ev.record);
                                  });
  trajectory.close();

  VirtualZ applied;
  outcome.report = finalize_calibration(
      outcome.optimization.best, backend, config.rpe, seeds.finalize, [&](const Evaluation& ev) {
        if (ev.record.candidate == 0) {
          writer.evaluation(ev, "before", {}, config.rpe);
          applied = virtual_z_correction(ev.record.estimated);
        } else {
          writer.evaluation(ev, "after", applied, config.rpe);
        }
      });

  const CalibrationReport& rep = outcome.report;
  const OptimizationResult& o = outcome.optimization;
  Json report{{"type", "report"},
              {"best_point", to_json(rep.point)},
              {"best_cost", o.best.cost},
              {"iterations", o.windows.size()},
              {"evaluations", o.history.size()},
              {"virtual_z", {{"phi_iz", rep.correction.phi_iz}, {"phi_zi", rep.correction.phi_zi}}},
              {"before", to_json(rep.before)},
              {"after", to_json(rep.after)}};
  writer.line(report);

  std::ofstream angles = open_output(config.output_dir, "angles.csv");
  write_angle_csv(angles, rep);

  report.erase("type");
  Json summary{{"schema_version", kSchemaVersion}, {"command", "calibrate"}};
  if (outcome.sweep) summary["sweep"] = sweep_summary(*outcome.sweep);
  for (const auto& [key, value] : report.items()) summary[key] = value;
  std::ofstream out = open_output(config.output_dir, "report.json");
  out << dump_json(summary) << '\n';
  return outcome;
}

ReplayReport cmd_replay(const fs::path& run_record) {
  std::ifstream in(run_record);
  if (!in) throw Error("cannot open run record " + run_record.string());
  return replay_run_records(in);
}

}  // namespace czcal
