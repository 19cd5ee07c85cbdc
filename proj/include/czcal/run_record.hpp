#pragma once

// Persisted run records. A run is a JSON-lines file: a header with the
// configuration snapshot, then per evaluation its raw circuit counts, the
// per-generation estimates and the resulting angles. Doubles are written with
// 17 significant digits, so a record read back reproduces every value
// bit for bit and replay can recompute the analysis from the counts alone.
// Tabular summaries (sweep landscape, optimizer trajectory, angle table) go
// to CSV.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "czcal/calibration.hpp"
#include "czcal/conditionality.hpp"
#include "czcal/run_config.hpp"

namespace czcal {

inline constexpr int kSchemaVersion = 1;

// Compact JSON; floating-point values use format_double, NaN and infinities
// become null.
std::string dump_json(const nlohmann::ordered_json& j);

// Current UTC time as 2024-01-31T12:34:56Z.
std::string utc_timestamp();

class RunRecordWriter {
 public:
  explicit RunRecordWriter(std::ostream& out) : out_(out) {}

  // `timestamp` is written as null when absent.
  void header(std::string_view command, const RunConfig& config,
              const std::optional<std::string>& timestamp);

  // Writes one evaluation and returns its id (0, 1, ... in call order).
  // `stage` is free text such as "optimize", "before" or "after".
  int evaluation(const Evaluation& ev, std::string_view stage, const VirtualZ& vz,
                 const RpeConfig& rpe);

  void line(const nlohmann::ordered_json& body);

 private:
  std::ostream& out_;
  int next_eval_ = 0;
};

struct ReplayReport {
  int evaluations = 0;          // evaluations recomputed from counts
  int skipped_evaluations = 0;  // failed or exact-mode evaluations (no counts)
  int generations_checked = 0;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

// Recomputes every evaluation's estimates from its stored counts and compares
// them with the stored values for exact equality. Throws Error for an unknown
// schema_version, an unknown line type or a malformed line.
ReplayReport replay_run_records(std::istream& in);

// ---- CSV -------------------------------------------------------------------

// amplitude,frequency,conditionality
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// iteration,candidate,amplitude,frequency,cost,k_last,theta_iz,theta_zi,theta_zz,status
void write_trajectory_csv(std::ostream& out, const std::vector<CostRecord>& history);
void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, const CostRecord& record);

// stage,angle,estimate,target,error,rms_window,k_last
void write_angle_csv(std::ostream& out, const CalibrationReport& report);

nlohmann::ordered_json to_json(const ControlPoint& p);
nlohmann::ordered_json to_json(const CzModelParams& p);
nlohmann::ordered_json to_json(const AngleReport& r);

}  // namespace czcal
