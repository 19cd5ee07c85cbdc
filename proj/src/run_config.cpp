#include "czcal/run_config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>
#include <type_traits>

#include "czcal/error.hpp"
#include "czcal/random.hpp"

namespace czcal {
namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

std::string path_of(std::string_view where, std::string_view key) {
  return std::string(where) + "." + std::string(key);
}

void read(const Json& j, std::string_view where, std::string_view key, double& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number()) throw ConfigError(path_of(where, key) + " must be a number");
  out = it->get<double>();
}

template <typename Int>
void read_int(const Json& j, std::string_view where, std::string_view key, Int& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer()) throw ConfigError(path_of(where, key) + " must be an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (!it->is_number_unsigned()) throw ConfigError(path_of(where, key) + " must be >= 0");
  }
  out = it->get<Int>();
}

void read_pair(const Json& j, std::string_view where, std::string_view key,
               std::array<double, 2>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    throw ConfigError(path_of(where, key) + " must be [qubit_a, qubit_b]");
  }
  out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

NoiseModel parse_noise(const Json& j) {
  constexpr std::string_view w = "noise";
  check_keys(j, w, {"depolarizing_rate_per_cz", "depolarizing_rate_per_1q", "readout_flip",
                    "readout_confusion", "prep_flip"});
  if (j.contains("readout_flip") && j.contains("readout_confusion")) {
    throw ConfigError("noise: give readout_flip or readout_confusion, not both");
  }
  NoiseModel n;
  read(j, w, "depolarizing_rate_per_cz", n.depolarizing_rate_per_cz);
  read(j, w, "depolarizing_rate_per_1q", n.depolarizing_rate_per_1q);
  std::array<double, 2> flip{0.0, 0.0};
  if (j.contains("readout_flip")) {
    read_pair(j, w, "readout_flip", flip);
    n.readout_confusion = {symmetric_flip(flip[0]), symmetric_flip(flip[1])};
  }
  if (j.contains("readout_confusion")) {
    const Json& rc = j.at("readout_confusion");
    auto bad = [] { return ConfigError("noise.readout_confusion must be two 2x2 matrices"); };
    if (!rc.is_array() || rc.size() != 2) throw bad();
    for (int q = 0; q < 2; ++q) {
      if (!rc[q].is_array() || rc[q].size() != 2) throw bad();
      for (int r = 0; r < 2; ++r) {
        if (!rc[q][r].is_array() || rc[q][r].size() != 2) throw bad();
        for (int c = 0; c < 2; ++c) {
          if (!rc[q][r][c].is_number()) throw bad();
          n.readout_confusion[q][r][c] = rc[q][r][c].get<double>();
        }
      }
    }
  }
  read_pair(j, w, "prep_flip", n.prep_flip_prob);
  return n;
}

Json noise_to_json(const NoiseModel& n) {
  Json rc = Json::array();
  for (const Confusion& c : n.readout_confusion) {
    rc.push_back(Json::array({Json::array({c[0][0], c[0][1]}), Json::array({c[1][0], c[1][1]})}));
  }
  return Json{{"depolarizing_rate_per_cz", n.depolarizing_rate_per_cz},
              {"depolarizing_rate_per_1q", n.depolarizing_rate_per_1q},
              {"readout_confusion", rc},
              {"prep_flip", Json::array({n.prep_flip_prob[0], n.prep_flip_prob[1]})}};
}

void parse_surrogate(const Json& j, SurrogateConfig& s) {
  constexpr std::string_view w = "surrogate";
  check_keys(j, w, {"amp_star", "freq_star", "detuning_width", "noise_slope", "stark"});
  read(j, w, "amp_star", s.amp_star);
  read(j, w, "freq_star", s.freq_star);
  read(j, w, "detuning_width", s.detuning_width);
  read(j, w, "noise_slope", s.noise_slope);
  if (auto it = j.find("stark"); it != j.end()) {
    constexpr std::string_view ws = "surrogate.stark";
    check_keys(*it, ws, {"iz_at_optimum", "zi_at_optimum", "iz_per_power", "zi_per_power",
                         "iz_per_detuning", "zi_per_detuning"});
    StarkCoefficients& c = s.stark;
    read(*it, ws, "iz_at_optimum", c.iz_at_optimum);
    read(*it, ws, "zi_at_optimum", c.zi_at_optimum);
    read(*it, ws, "iz_per_power", c.iz_per_power);
    read(*it, ws, "zi_per_power", c.zi_per_power);
    read(*it, ws, "iz_per_detuning", c.iz_per_detuning);
    read(*it, ws, "zi_per_detuning", c.zi_per_detuning);
  }
}

void parse_optimizer(const Json& j, RunConfig& config) {
  constexpr std::string_view w = "optimizer";
  check_keys(j, w, {"strategy", "population", "max_iterations", "shrink", "convergence_cost",
                    "initial_window", "window_from_sweep"});
  OptimizerConfig& o = config.optimizer;
  if (auto it = j.find("strategy"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("optimizer.strategy must be a string");
    try {
      o.strategy = parse_strategy(it->get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("optimizer.strategy: ") + e.what());
    }
  }
  read_int(j, w, "population", o.population);
  read_int(j, w, "max_iterations", o.max_iterations);
  read(j, w, "shrink", o.shrink);
  read(j, w, "convergence_cost", o.convergence_cost);
  if (auto it = j.find("window_from_sweep"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError("optimizer.window_from_sweep must be a boolean");
    config.window_from_sweep = it->get<bool>();
  }
  if (auto it = j.find("initial_window"); it != j.end()) {
    constexpr std::string_view ww = "optimizer.initial_window";
    check_keys(*it, ww, {"amplitude", "frequency", "amp_half_width", "freq_half_width"});
    SearchWindow& win = o.initial_window;
    read(*it, ww, "amplitude", win.center.amplitude);
    read(*it, ww, "frequency", win.center.frequency);
    read(*it, ww, "amp_half_width", win.amp_half_width);
    read(*it, ww, "freq_half_width", win.freq_half_width);
  }
}

void parse_sweep(const Json& j, SweepConfig& s) {
  constexpr std::string_view w = "sweep";
  check_keys(j, w, {"amplitude", "frequency", "shots"});
  auto axis = [&](std::string_view key, double& lo, double& hi, int& steps) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array() || it->size() != 3 || !(*it)[0].is_number() || !(*it)[1].is_number() ||
        !(*it)[2].is_number_integer()) {
      throw ConfigError(path_of(w, key) + " must be [lo, hi, steps]");
    }
    lo = (*it)[0].get<double>();
    hi = (*it)[1].get<double>();
    steps = (*it)[2].get<int>();
  };
  axis("amplitude", s.amp_lo, s.amp_hi, s.amp_steps);
  axis("frequency", s.freq_lo, s.freq_hi, s.freq_steps);
  read_int(j, w, "shots", s.shots);
}

}  // namespace

RunSeeds derive_run_seeds(std::uint64_t master) {
  return {derive_seed(master, {1}), derive_seed(master, {2}), derive_seed(master, {3}),
          derive_seed(master, {4}), derive_seed(master, {5})};
}

void validate(const SweepConfig& s) {
  if (s.amp_steps < 1 || s.freq_steps < 1) {
    throw ConfigError("sweep grid is empty: steps must be >= 1 on both axes");
  }
  if (!std::isfinite(s.amp_lo) || !std::isfinite(s.amp_hi) || !std::isfinite(s.freq_lo) ||
      !std::isfinite(s.freq_hi)) {
    throw ConfigError("sweep bounds must be finite");
  }
  if (s.amp_lo > s.amp_hi || s.freq_lo > s.freq_hi) throw ConfigError("sweep bounds must satisfy lo <= hi");
  if (s.amp_lo < 0.0) throw ConfigError("sweep amplitudes must be >= 0");
  if (s.shots < 1) throw ConfigError("sweep.shots must be >= 1");
}

void validate(const RunConfig& config) {
  validate(config.surrogate);
  validate(config.rpe);
  validate(config.optimizer);
  validate(config.sweep);
}

RunConfig parse_run_config(const Json& j) {
  check_keys(j, "config", {"seed", "output_dir", "surrogate", "noise", "rpe", "optimizer", "sweep"});
  RunConfig config;
  try {
    read_int(j, "config", "seed", config.seed);
    if (auto it = j.find("output_dir"); it != j.end()) {
      if (!it->is_string()) throw ConfigError("config.output_dir must be a string");
      config.output_dir = it->get<std::string>();
    }
    if (auto it = j.find("surrogate"); it != j.end()) parse_surrogate(*it, config.surrogate);
    if (auto it = j.find("noise"); it != j.end()) config.surrogate.noise_floor = parse_noise(*it);
    if (auto it = j.find("rpe"); it != j.end()) {
      check_keys(*it, "rpe", {"k_max", "shots"});
      read_int(*it, "rpe", "k_max", config.rpe.k_max);
      read_int(*it, "rpe", "shots", config.rpe.shots);
    }
    if (auto it = j.find("optimizer"); it != j.end()) parse_optimizer(*it, config);
    if (auto it = j.find("sweep"); it != j.end()) parse_sweep(*it, config.sweep);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

Json to_json(const RunConfig& c) {
  const StarkCoefficients& st = c.surrogate.stark;
  const SearchWindow& win = c.optimizer.initial_window;
  return Json{
      {"seed", c.seed},
      {"surrogate",
       {{"amp_star", c.surrogate.amp_star},
        {"freq_star", c.surrogate.freq_star},
        {"detuning_width", c.surrogate.detuning_width},
        {"noise_slope", c.surrogate.noise_slope},
        {"stark",
         {{"iz_at_optimum", st.iz_at_optimum},
          {"zi_at_optimum", st.zi_at_optimum},
          {"iz_per_power", st.iz_per_power},
          {"zi_per_power", st.zi_per_power},
          {"iz_per_detuning", st.iz_per_detuning},
          {"zi_per_detuning", st.zi_per_detuning}}}}},
      {"noise", noise_to_json(c.surrogate.noise_floor)},
      {"rpe", {{"k_max", c.rpe.k_max}, {"shots", c.rpe.shots}}},
      {"optimizer",
       {{"strategy", std::string(strategy_name(c.optimizer.strategy))},
        {"population", c.optimizer.population},
        {"max_iterations", c.optimizer.max_iterations},
        {"shrink", c.optimizer.shrink},
        {"convergence_cost", c.optimizer.convergence_cost},
        {"window_from_sweep", c.window_from_sweep},
        {"initial_window",
         {{"amplitude", win.center.amplitude},
          {"frequency", win.center.frequency},
          {"amp_half_width", win.amp_half_width},
          {"freq_half_width", win.freq_half_width}}}}},
      {"sweep",
       {{"amplitude", Json::array({c.sweep.amp_lo, c.sweep.amp_hi, c.sweep.amp_steps})},
        {"frequency", Json::array({c.sweep.freq_lo, c.sweep.freq_hi, c.sweep.freq_steps})},
        {"shots", c.sweep.shots}}}};
}

}  // namespace czcal
