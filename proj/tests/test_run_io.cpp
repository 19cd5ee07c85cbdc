#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "czcal/commands.hpp"
#include "czcal/error.hpp"

namespace czcal {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class RunIoTest : public testing::Test {
 protected:
  void SetUp() override {
    const auto* info = testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("czcal_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunConfig small(const std::string& sub) const {
    RunConfig c;
    c.seed = 99;
    c.output_dir = root_ / sub;
    c.rpe.k_max = 3;
    c.optimizer.population = 4;
    c.optimizer.max_iterations = 3;
    c.sweep = {0.8, 1.2, 3, -0.1, 0.1, 3, 200};
    return c;
  }

  fs::path root_;
};

TEST(RunConfigParse, EmptyObjectGivesDefaults) {
  const RunConfig c = parse_run_config(Json::object());
  const RunConfig d;
  EXPECT_EQ(dump_json(to_json(c)), dump_json(to_json(d)));
}

TEST(RunConfigParse, SnapshotRoundTrips) {
  RunConfig c;
  c.seed = 12345678901234567ULL;
  c.surrogate.noise_floor.readout_confusion = {symmetric_flip(0.05), symmetric_flip(0.02)};
  c.surrogate.noise_floor.depolarizing_rate_per_cz = 0.01;
  c.optimizer.strategy = StrategyKind::kCmaEs;
  c.window_from_sweep = false;
  const Json snap = to_json(c);
  EXPECT_EQ(dump_json(to_json(parse_run_config(snap))), dump_json(snap));
}

TEST(RunConfigParse, ReadsSections) {
  const Json j = Json::parse(R"({
    "seed": 7,
    "noise": {"depolarizing_rate_per_cz": 0.02, "readout_flip": [0.05, 0.05]},
    "rpe": {"k_max": 4, "shots": 1000},
    "optimizer": {"strategy": "cmaes", "population": 6, "initial_window": {"amplitude": 1.1}},
    "sweep": {"amplitude": [0.5, 1.5, 5], "shots": 50}
  })");
  const RunConfig c = parse_run_config(j);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.surrogate.noise_floor.depolarizing_rate_per_cz, 0.02);
  EXPECT_EQ(c.surrogate.noise_floor.readout_confusion[1][0][1], 0.05);
  EXPECT_EQ(c.rpe.k_max, 4);
  EXPECT_EQ(c.rpe.shots, 1000);
  EXPECT_EQ(c.optimizer.strategy, StrategyKind::kCmaEs);
  EXPECT_EQ(c.optimizer.population, 6);
  EXPECT_EQ(c.optimizer.initial_window.center.amplitude, 1.1);
  EXPECT_EQ(c.optimizer.initial_window.amp_half_width, 0.3);
  EXPECT_EQ(c.sweep.amp_steps, 5);
  EXPECT_EQ(c.sweep.freq_steps, 11);
}

TEST(RunConfigParse, RejectsInvalidConfigs) {
  const char* bad[] = {
      R"({"optimizer": {"max_iterations": 0}})",
      R"({"sweep": {"amplitude": [0.5, 1.5, 0]}})",
      R"({"rpe": {"shots": 0}})",
      R"({"rpe": {"k_max": "six"}})",
      R"({"seed": -1})",
      R"({"colour": "blue"})",
      R"({"optimizer": {"strategy": "simplex"}})",
      R"({"noise": {"readout_flip": [0.1, 0.1], "readout_confusion": [[[1,0],[0,1]],[[1,0],[0,1]]]}})",
      R"({"noise": {"depolarizing_rate_per_cz": 2}})",
      R"({"surrogate": {"amp_star": 0}})",
      R"({"sweep": {"frequency": [1, -1, 3]}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse_run_config(Json::parse(text)), ConfigError) << text;
  }
}

TEST(RunConfigParse, MissingFileIsConfigError) {
  EXPECT_THROW(load_run_config("/nonexistent/czcal.json"), ConfigError);
}

TEST(DumpJson, SeventeenSignificantDigits) {
  EXPECT_EQ(dump_json(Json{{"x", 0.1}}), R"({"x":0.10000000000000001})");
  EXPECT_EQ(dump_json(Json{{"x", 1.0}, {"n", 3}}), R"({"x":1,"n":3})");
  EXPECT_EQ(dump_json(Json{{"x", std::numeric_limits<double>::infinity()}}), R"({"x":null})");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(Json::parse(dump_json(Json{{"v", v}}))["v"].get<double>(), v);
}

TEST_F(RunIoTest, SweepCsvIsDeterministic) {
  const RunConfig a = small("a");
  RunConfig b = small("b");
  cmd_sweep(a);
  cmd_sweep(b);
  const std::string csv = slurp(a.output_dir / "conditionality.csv");
  EXPECT_EQ(csv, slurp(b.output_dir / "conditionality.csv"));
  const auto rows = lines_of(csv);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], "amplitude,frequency,conditionality");
}

TEST_F(RunIoTest, RpeAtKZeroWritesSixCircuits) {
  RunConfig c = small("k0");
  c.rpe.k_max = 0;
  cmd_rpe(c, std::nullopt);
  int circuits = 0;
  for (const std::string& line : lines_of(slurp(c.output_dir / "rpe.jsonl"))) {
    if (Json::parse(line).at("type") == "circuit") ++circuits;
  }
  EXPECT_EQ(circuits, 6);
}

TEST_F(RunIoTest, RpeAtIdealPointIsWithinBounds) {
  RunConfig c = small("ideal");
  c.rpe.k_max = 6;
  c.surrogate.stark = {0, 0, 0, 0, 0, 0};
  const CzRpeResult r = cmd_rpe(c, ControlPoint{1.0, 0.0});
  const AngleWindows w = r.windows();
  EXPECT_LE(std::abs(r.estimated.theta_iz - kPi / 2), w.window.theta_iz);
  EXPECT_LE(std::abs(r.estimated.theta_zi - kPi / 2), w.window.theta_zi);
  EXPECT_LE(std::abs(r.estimated.theta_zz + kPi / 2), w.window.theta_zz);

  const Json summary = Json::parse(slurp(c.output_dir / "rpe_summary.json"));
  EXPECT_EQ(summary.at("angles").at("theta").at("zz").get<double>(), r.estimated.theta_zz);
  EXPECT_EQ(summary.at("angles").at("rms_window").at("zz").get<double>(), w.window.theta_zz);

  const ReplayReport rep = cmd_replay(c.output_dir / "rpe.jsonl");
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.evaluations, 1);
  EXPECT_EQ(rep.generations_checked, 21);
}

TEST_F(RunIoTest, CalibrateIsDeterministicAndReplayable) {
  const RunConfig a = small("a");
  const RunConfig b = small("b");
  cmd_calibrate(a);
  cmd_calibrate(b, {false, ExecPolicy::kSerial});
  for (const char* name : {"calibration.jsonl", "trajectory.csv", "angles.csv", "report.json",
                           "conditionality.csv"}) {
    EXPECT_EQ(slurp(a.output_dir / name), slurp(b.output_dir / name)) << name;
  }
  const auto traj = lines_of(slurp(a.output_dir / "trajectory.csv"));
  EXPECT_EQ(traj[0], "iteration,candidate,amplitude,frequency,cost,k_last,theta_iz,theta_zi,theta_zz,status");
  EXPECT_EQ(traj.size(), 13u);
  EXPECT_EQ(lines_of(slurp(a.output_dir / "angles.csv"))[0],
            "stage,angle,estimate,target,error,rms_window,k_last");

  const ReplayReport rep = cmd_replay(a.output_dir / "calibration.jsonl");
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.evaluations, 14);
  EXPECT_EQ(rep.skipped_evaluations, 0);
}

TEST_F(RunIoTest, StampWritesTimestamp) {
  RunConfig c = small("stamp");
  cmd_rpe(c, std::nullopt, {true, ExecPolicy::kParallel});
  const Json header = Json::parse(lines_of(slurp(c.output_dir / "rpe.jsonl"))[0]);
  EXPECT_TRUE(header.at("timestamp").is_string());
  cmd_rpe(c, std::nullopt);
  EXPECT_TRUE(Json::parse(lines_of(slurp(c.output_dir / "rpe.jsonl"))[0]).at("timestamp").is_null());
}

TEST_F(RunIoTest, ReplayDetectsTamperedCounts) {
  const RunConfig c = small("tamper");
  cmd_rpe(c, std::nullopt);
  std::vector<std::string> lines = lines_of(slurp(c.output_dir / "rpe.jsonl"));
  for (std::string& line : lines) {
    Json j = Json::parse(line);
    if (j.at("type") == "circuit" && j.at("label") == "phi00_01/I" && j.at("k") == 0) {
      j["counts"]["00"] = j["counts"]["00"].get<int>() - 5;
      j["counts"]["01"] = j["counts"]["01"].get<int>() + 5;
      line = dump_json(j);
    }
  }
  std::ostringstream joined;
  for (const std::string& l : lines) joined << l << '\n';
  std::istringstream in(joined.str());
  const ReplayReport rep = replay_run_records(in);
  EXPECT_FALSE(rep.ok());
}

TEST_F(RunIoTest, ReplayRejectsUnknownSchemaVersion) {
  const RunConfig c = small("schema");
  cmd_rpe(c, std::nullopt);
  std::string text = slurp(c.output_dir / "rpe.jsonl");
  const std::string from = "\"schema_version\":1";
  text.replace(text.find(from), from.size(), "\"schema_version\":2");
  std::istringstream in(text);
  EXPECT_THROW(replay_run_records(in), Error);

  std::istringstream unknown_type(R"({"schema_version":1,"type":"header"}
{"schema_version":1,"type":"mystery"}
)");
  EXPECT_THROW(replay_run_records(unknown_type), Error);
  std::istringstream headless(R"({"schema_version":1,"type":"report"}
)");
  EXPECT_THROW(replay_run_records(headless), Error);
}

// Field names and order per record type are part of the documented format.
TEST_F(RunIoTest, RecordFieldsMatchGolden) {
  const RunConfig c = small("fields");
  cmd_calibrate(c);
  std::map<std::string, std::string> seen;
  for (const std::string& line : lines_of(slurp(c.output_dir / "calibration.jsonl"))) {
    const Json j = Json::parse(line);
    std::string keys;
    for (const auto& [k, v] : j.items()) keys += (keys.empty() ? "" : ",") + k;
    std::string type = j.at("type");
    if (type == "report") type += j.contains("sweep") ? "(sweep)" : "(final)";
    seen.emplace(type, keys);
  }
  std::string actual;
  for (const auto& [type, keys] : seen) actual += type + ": " + keys + "\n";
  EXPECT_EQ(actual, slurp(fs::path(CZCAL_TEST_DATA_DIR) / "record_fields.txt"));
}

}  // namespace
}  // namespace czcal
