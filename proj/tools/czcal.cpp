// czcal: command-line front end for the CZ calibration toolkit.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "czcal/commands.hpp"
#include "czcal/error.hpp"
#include "czcal/numfmt.hpp"

namespace {

using czcal::format_double;

czcal::ControlPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw czcal::ConfigError("--point expects AMP,FREQ");
  return {czcal::parse_double(std::string_view(text).substr(0, comma)),
          czcal::parse_double(std::string_view(text).substr(comma + 1))};
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool stamp = false;
  bool serial = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration (defaults apply if omitted)");
  cmd->add_option("--seed", c.seed, "master seed; overrides the config");
  cmd->add_option("--out", c.out, "output directory; overrides the config");
  cmd->add_flag("--stamp", c.stamp, "write a UTC timestamp into run records");
  cmd->add_flag("--serial", c.serial, "use the serial reference kernels");
}

czcal::RunConfig resolve(const Common& c) {
  czcal::RunConfig config;
  if (!c.config_path.empty()) config = czcal::load_run_config(c.config_path);
  if (c.seed) config.seed = *c.seed;
  if (!c.out.empty()) config.output_dir = c.out;
  czcal::validate(config);
  return config;
}

czcal::CommandOptions options(const Common& c) {
  return {c.stamp, c.serial ? czcal::ExecPolicy::kSerial : czcal::ExecPolicy::kParallel};
}

void print_angles(const char* stage, const czcal::AngleReport& a) {
  std::cout << stage << ": theta_iz=" << format_double(a.estimated.theta_iz)
            << " theta_zi=" << format_double(a.estimated.theta_zi)
            << " theta_zz=" << format_double(a.estimated.theta_zz) << " k_last=" << a.k_last << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrate a CZ gate on a simulated two-qubit device with robust phase estimation"};
  app.require_subcommand(1);

  Common common;
  std::string point_text;
  std::string replay_path;

  CLI::App* sweep = app.add_subcommand("sweep", "coarse conditionality sweep over the control grid");
  add_common(sweep, common);

  CLI::App* rpe = app.add_subcommand("rpe", "three-phase RPE of the CZ gate at one control point");
  add_common(rpe, common);
  rpe->add_option("--point", point_text, "control point AMP,FREQ (default: surrogate optimum)");

  CLI::App* calibrate = app.add_subcommand("calibrate", "sweep, optimize theta_zz, then correct local phases");
  add_common(calibrate, common);

  CLI::App* replay = app.add_subcommand("replay", "recompute estimates from a run record's counts");
  replay->add_option("record", replay_path, "JSON-lines run record")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const czcal::RunConfig config = resolve(common);
      const czcal::SweepResult s = czcal::cmd_sweep(config, options(common));
      std::cout << "sweep: " << s.points.size() << " points, max R=" << format_double(s.best().conditionality)
                << " at amplitude=" << format_double(s.best().point.amplitude)
                << " frequency=" << format_double(s.best().point.frequency) << '\n'
                << "wrote " << (config.output_dir / "conditionality.csv").string() << '\n';
    } else if (rpe->parsed()) {
      const czcal::RunConfig config = resolve(common);
      std::optional<czcal::ControlPoint> point;
      if (!point_text.empty()) point = parse_point(point_text);
      const czcal::CzRpeResult r = czcal::cmd_rpe(config, point, options(common));
      print_angles("estimate", {r.estimated, r.windows(), r.k_last});
      std::cout << "wrote " << (config.output_dir / "rpe.jsonl").string() << '\n';
    } else if (calibrate->parsed()) {
      const czcal::RunConfig config = resolve(common);
      const czcal::CalibrationOutcome c = czcal::cmd_calibrate(config, options(common));
      const auto& best = c.optimization.best;
      std::cout << "best point: amplitude=" << format_double(best.point.amplitude)
                << " frequency=" << format_double(best.point.frequency)
                << " cost=" << format_double(best.cost) << " after "
                << c.optimization.history.size() << " evaluations\n";
      print_angles("before", c.report.before);
      print_angles("after", c.report.after);
      std::cout << "wrote " << (config.output_dir / "report.json").string() << '\n';
    } else if (replay->parsed()) {
      const czcal::ReplayReport r = czcal::cmd_replay(replay_path);
      std::cout << "replayed " << r.evaluations << " evaluations (" << r.generations_checked
                << " generations), skipped " << r.skipped_evaluations << '\n';
      for (const std::string& m : r.mismatches) std::cout << "mismatch: " << m << '\n';
      if (!r.ok()) {
        std::cout << "replay FAILED: " << r.mismatches.size() << " mismatches\n";
        return 1;
      }
      std::cout << "replay OK: all values identical\n";
    }
  } catch (const czcal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
