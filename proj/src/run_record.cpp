#include "czcal/run_record.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "czcal/error.hpp"
#include "czcal/numfmt.hpp"

namespace czcal {
namespace {

using Json = nlohmann::ordered_json;

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

std::string_view mode_name(ExpectationMode m) {
  return m == ExpectationMode::kSampled ? "sampled" : "exact";
}

Json counts_to_json(const ShotCounts& c) {
  Json j = Json::object();
  for (Outcome o : kAllOutcomes) j[std::string(outcome_label(o))] = c[o];
  return j;
}

ShotCounts counts_from_json(const Json& j) {
  ShotCounts c;
  for (Outcome o : kAllOutcomes) c[o] = j.at(std::string(outcome_label(o))).get<std::uint64_t>();
  return c;
}

CzModelParams params_from_json(const Json& j) {
  return {j.at("iz").get<double>(), j.at("zi").get<double>(), j.at("zz").get<double>()};
}

double as_double(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

struct StoredEvaluation {
  Json header;
  std::vector<CircuitRecord> circuits;
  std::vector<Json> generations;
  std::optional<Json> estimate;
};

void compare(ReplayReport& report, int eval, const std::string& what, double stored,
             double recomputed) {
  if (stored == recomputed) return;
  report.mismatches.push_back("eval " + std::to_string(eval) + " " + what + ": stored " +
                              format_double(stored) + ", recomputed " + format_double(recomputed));
}

void check_evaluation(ReplayReport& report, int id, const StoredEvaluation& s) {
  const int k_max = s.header.at("k_max").get<int>();
  rpe::EstimatorOptions estimator;
  estimator.n0 = s.header.at("n0").get<std::int64_t>();
  const CzModelParams reference = params_from_json(s.header.at("reference"));

  const CzRpeResult r = analyze_records(s.circuits, k_max, estimator, reference);
  ++report.evaluations;

  for (const Json& g : s.generations) {
    const PhaseClass p = parse_phase_class(g.at("phase").get<std::string>());
    const int k = g.at("k").get<int>();
    if (k < 0 || k > k_max) throw Error("generation line with k outside 0..k_max");
    const PhaseAnalysis& pa = r.phases[static_cast<int>(p)];
    const rpe::GenerationEstimate& e = pa.estimates[static_cast<std::size_t>(k)];
    const rpe::IQMeasurement& m = pa.measurements[static_cast<std::size_t>(k)];
    const std::string tag = std::string(phase_class_name(p)) + " k=" + std::to_string(k);
    compare(report, id, tag + " i", g.at("i").get<double>(), m.i_value);
    compare(report, id, tag + " q", g.at("q").get<double>(), m.q_value);
    compare(report, id, tag + " phi_hat", g.at("phi_hat").get<double>(), e.phi_hat);
    compare(report, id, tag + " window_lo", g.at("window_lo").get<double>(), e.window_lo);
    compare(report, id, tag + " window_hi", g.at("window_hi").get<double>(), e.window_hi);
    if (g.at("n_k").get<std::int64_t>() != e.n_k || g.at("trusted").get<bool>() != e.trusted) {
      report.mismatches.push_back("eval " + std::to_string(id) + " " + tag +
                                  ": branch index or trust flag differs");
    }
    ++report.generations_checked;
  }
  if (s.generations.size() != 3 * static_cast<std::size_t>(k_max + 1)) {
    report.mismatches.push_back("eval " + std::to_string(id) + ": expected " +
                                std::to_string(3 * (k_max + 1)) + " generation lines, found " +
                                std::to_string(s.generations.size()));
  }

  if (!s.estimate) {
    report.mismatches.push_back("eval " + std::to_string(id) + ": no estimate line");
    return;
  }
  const Json& est = *s.estimate;
  for (PhaseClass p : kAllPhaseClasses) {
    const std::string name(phase_class_name(p));
    compare(report, id, "phase " + name, est.at("phases").at(name).get<double>(), r.relative[p]);
    if (est.at("k_last").at(name).get<int>() != r.phase_k_last(p)) {
      report.mismatches.push_back("eval " + std::to_string(id) + " k_last " + name + " differs");
    }
  }
  const CzModelParams theta = params_from_json(est.at("theta"));
  compare(report, id, "theta_iz", theta.theta_iz, r.estimated.theta_iz);
  compare(report, id, "theta_zi", theta.theta_zi, r.estimated.theta_zi);
  compare(report, id, "theta_zz", theta.theta_zz, r.estimated.theta_zz);
  compare(report, id, "cost", as_double(est.at("cost")), zz_cost(r.estimated));
}

void write_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) out << ',';
    first = false;
    out << c;
  }
  out << '\n';
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const ControlPoint& p) {
  return Json{{"amplitude", p.amplitude}, {"frequency", p.frequency}};
}

Json to_json(const CzModelParams& p) {
  return Json{{"iz", p.theta_iz}, {"zi", p.theta_zi}, {"zz", p.theta_zz}};
}

Json to_json(const AngleReport& r) {
  return Json{{"theta", to_json(r.estimated)},
              {"rms_window", to_json(r.windows.window)},
              {"k_last", {{"iz", r.windows.k_last[0]}, {"zi", r.windows.k_last[1]},
                          {"zz", r.windows.k_last[2]}}},
              {"k_last_min", r.k_last}};
}

void RunRecordWriter::line(const Json& body) {
  Json j{{"schema_version", kSchemaVersion}};
  for (const auto& [key, value] : body.items()) j[key] = value;
  out_ << dump_json(j) << '\n';
}

void RunRecordWriter::header(std::string_view command, const RunConfig& config,
                             const std::optional<std::string>& timestamp) {
  line(Json{{"type", "header"},
            {"command", std::string(command)},
            {"timestamp", timestamp ? Json(*timestamp) : Json(nullptr)},
            {"config", to_json(config)}});
}

int RunRecordWriter::evaluation(const Evaluation& ev, std::string_view stage, const VirtualZ& vz,
                                const RpeConfig& rpe) {
  const int id = next_eval_++;
  const CostRecord& rec = ev.record;
  Json head{{"type", "evaluation"},
            {"eval", id},
            {"stage", std::string(stage)},
            {"iteration", rec.iteration},
            {"candidate", rec.candidate},
            {"point", to_json(rec.point)},
            {"virtual_z", {{"phi_iz", vz.phi_iz}, {"phi_zi", vz.phi_zi}}},
            {"k_max", rpe.k_max},
            {"shots", rpe.shots},
            {"mode", std::string(mode_name(rpe.mode))},
            {"n0", rpe.estimator.n0},
            {"reference", to_json(rpe.reference)},
            {"status", rec.failed() ? "failed" : "ok"}};
  if (rec.failed()) head["error"] = *rec.failure;
  line(head);
  if (!ev.rpe) return id;

  const CzRpeResult& r = *ev.rpe;
  for (const CircuitRecord& c : r.records) {
    line(Json{{"type", "circuit"},
              {"eval", id},
              {"label", to_string(c.label)},
              {"k", c.k},
              {"counts", counts_to_json(c.counts)}});
  }
  for (const PhaseAnalysis& pa : r.phases) {
    for (std::size_t k = 0; k < pa.estimates.size(); ++k) {
      const rpe::GenerationEstimate& g = pa.estimates[k];
      line(Json{{"type", "generation"},
                {"eval", id},
                {"phase", std::string(phase_class_name(pa.phase))},
                {"k", g.k},
                {"i", pa.measurements[k].i_value},
                {"q", pa.measurements[k].q_value},
                {"phi_hat", g.phi_hat},
                {"window_lo", g.window_lo},
                {"window_hi", g.window_hi},
                {"trusted", g.trusted},
                {"n_k", g.n_k}});
    }
  }
  Json phases = Json::object();
  Json k_last = Json::object();
  for (PhaseClass p : kAllPhaseClasses) {
    phases[std::string(phase_class_name(p))] = r.relative[p];
    k_last[std::string(phase_class_name(p))] = r.phase_k_last(p);
  }
  line(Json{{"type", "estimate"},
            {"eval", id},
            {"phases", phases},
            {"k_last", k_last},
            {"theta", to_json(r.estimated)},
            {"cost", rec.cost},
            {"k_last_min", r.k_last}});
  return id;
}

ReplayReport replay_run_records(std::istream& in) {
  std::map<int, StoredEvaluation> evals;
  std::string text;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    const std::string where = "run record line " + std::to_string(line_no);
    try {
      const Json j = Json::parse(text);
      if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
        throw Error(where + ": missing schema_version");
      }
      const int version = j.at("schema_version").get<int>();
      if (version != kSchemaVersion) {
        throw Error(where + ": unsupported schema_version " + std::to_string(version) +
                    " (this build reads " + std::to_string(kSchemaVersion) + ")");
      }
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        saw_header = true;
      } else if (type == "report") {
        // Summary only; everything in it is derived from the lines above.
      } else if (type == "evaluation") {
        StoredEvaluation& s = evals[j.at("eval").get<int>()];
        if (!s.header.is_null()) throw Error(where + ": duplicate evaluation id");
        s.header = j;
      } else if (type == "circuit" || type == "generation" || type == "estimate") {
        auto it = evals.find(j.at("eval").get<int>());
        if (it == evals.end() || it->second.header.is_null()) {
          throw Error(where + ": " + type + " line before its evaluation line");
        }
        StoredEvaluation& s = it->second;
        if (type == "circuit") {
          s.circuits.push_back({parse_circuit_label(j.at("label").get<std::string>()),
                                j.at("k").get<int>(), counts_from_json(j.at("counts"))});
        } else if (type == "generation") {
          s.generations.push_back(j);
        } else {
          s.estimate = j;
        }
      } else {
        throw Error(where + ": unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(where + ": " + e.what());
    }
  }
  if (!saw_header) throw Error("run record has no header line");

  ReplayReport report;
  for (const auto& [id, s] : evals) {
    const bool replayable = s.header.at("status") == "ok" && s.header.at("mode") == "sampled";
    if (!replayable) {
      ++report.skipped_evaluations;
      continue;
    }
    try {
      check_evaluation(report, id, s);
    } catch (const nlohmann::json::exception& e) {
      throw Error("evaluation " + std::to_string(id) + ": " + e.what());
    }
  }
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "amplitude,frequency,conditionality\n";
  for (const SweepPoint& p : sweep.points) {
    write_row(out, {format_double(p.point.amplitude), format_double(p.point.frequency),
                    format_double(p.conditionality)});
  }
}

void write_trajectory_header(std::ostream& out) {
  out << "iteration,candidate,amplitude,frequency,cost,k_last,theta_iz,theta_zi,theta_zz,status\n";
}

void write_trajectory_row(std::ostream& out, const CostRecord& r) {
  const bool ok = !r.failed();
  auto num = [ok](double v) { return ok ? format_double(v) : std::string(); };
  write_row(out, {std::to_string(r.iteration), std::to_string(r.candidate),
                  format_double(r.point.amplitude), format_double(r.point.frequency),
                  format_double(r.cost), ok ? std::to_string(r.k_last) : std::string(),
                  num(r.estimated.theta_iz), num(r.estimated.theta_zi), num(r.estimated.theta_zz),
                  ok ? "ok" : "failed"});
}

void write_trajectory_csv(std::ostream& out, const std::vector<CostRecord>& history) {
  write_trajectory_header(out);
  for (const CostRecord& r : history) write_trajectory_row(out, r);
}

void write_angle_csv(std::ostream& out, const CalibrationReport& report) {
  out << "stage,angle,estimate,target,error,rms_window,k_last\n";
  const CzModelParams target = CzModelParams::targets();
  auto rows = [&](std::string_view stage, const AngleReport& a) {
    const double est[3] = {a.estimated.theta_iz, a.estimated.theta_zi, a.estimated.theta_zz};
    const double tgt[3] = {target.theta_iz, target.theta_zi, target.theta_zz};
    const double win[3] = {a.windows.window.theta_iz, a.windows.window.theta_zi,
                           a.windows.window.theta_zz};
    const char* names[3] = {"theta_iz", "theta_zi", "theta_zz"};
    for (int i = 0; i < 3; ++i) {
      write_row(out, {std::string(stage), names[i], format_double(est[i]), format_double(tgt[i]),
                      format_double(est[i] - tgt[i]), format_double(win[i]),
                      std::to_string(a.windows.k_last[static_cast<std::size_t>(i)])});
    }
  };
  rows("before", report.before);
  rows("after", report.after);
}

}  // namespace czcal
