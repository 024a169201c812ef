#include "smagg/report.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace smagg {

namespace {

nlohmann::ordered_json scenario_json(const ScenarioConfig& config) {
  const EpochConfig& e = config.epoch;
  nlohmann::ordered_json j;
  j["mode"] = to_string(e.mode);
  j["n_registered"] = e.n_registered;
  j["effective_n"] = build_registry(e.n_registered).effective_n();
  j["m"] = e.m;
  j["hash"] = to_string(e.hash_alg);
  j["aes_bits"] = static_cast<int>(e.aes_bits);
  j["scale"] = e.scale;
  j["master_seed"] = config.master_seed;
  j["freshness"] = config.check_freshness;
  j["data"] = std::holds_alternative<CsvSource>(config.data) ? "csv" : "synthetic";
  auto attacks = nlohmann::ordered_json::array();
  for (const AdversaryScript& s : config.adversaries) {
    nlohmann::ordered_json a;
    a["action"] = to_string(s.action);
    a["link"] = to_string(s.link);
    a["meter"] = s.meter ? nlohmann::ordered_json(*s.meter) : nlohmann::ordered_json(nullptr);
    a["every"] = s.frames.every;
    a["offset"] = s.frames.offset;
    a["probability"] = s.frames.probability;
    attacks.push_back(std::move(a));
  }
  j["adversaries"] = std::move(attacks);
  return j;
}

}  // namespace

std::string run_report_json(const RunReport& report, const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_json(config);
  nlohmann::ordered_json summary;
  summary["frames_total"] = report.frames_total;
  summary["frames_attacked"] = report.frames_attacked;
  summary["frames_detected"] = report.frames_detected;
  summary["frames_corrupted_undetected"] = report.frames_corrupted_undetected;
  summary["frames_collateral_rejected"] = report.frames_collateral_rejected;
  summary["frames_silent_corruption"] = report.frames_silent_corruption;
  summary["detection_rate"] = report.detection_rate();
  summary["messages_sm_da"] = report.messages_sm_da;
  summary["messages_da_cc"] = report.messages_da_cc;
  j["summary"] = std::move(summary);
  nlohmann::ordered_json rejections = nlohmann::ordered_json::object();
  for (const auto& [reason, count] : report.rejections) rejections[reason] = count;
  j["rejections"] = std::move(rejections);
  auto frames = nlohmann::ordered_json::array();
  for (const FrameVerdict& v : report.frames) {
    nlohmann::ordered_json f;
    f["frame"] = v.frame;
    f["timestamp"] = v.timestamp;
    f["attacked"] = v.attacked;
    f["status"] = v.accepted ? "accepted" : "rejected";
    f["reason"] = v.reason ? nlohmann::ordered_json(std::string(to_string(*v.reason)))
                           : nlohmann::ordered_json(nullptr);
    f["recovered"] = v.accepted ? nlohmann::ordered_json(v.recovered) : nlohmann::ordered_json(nullptr);
    f["truth"] = v.truth;
    frames.push_back(std::move(f));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

std::string run_report_csv(const RunReport& report) {
  std::ostringstream out;
  out << "frame,timestamp,attacked,status,reason,recovered_raw,truth_raw\n";
  for (const FrameVerdict& v : report.frames) {
    out << v.frame << ',' << v.timestamp << ',' << (v.attacked ? 1 : 0) << ','
        << (v.accepted ? "accepted" : "rejected") << ',' << (v.reason ? to_string(*v.reason) : "") << ',';
    if (v.accepted) out << v.recovered;
    out << ',' << v.truth << '\n';
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Precondition, "cannot write " + path.string());
  out << text;
}

void write_run_report(const RunReport& report, const ScenarioConfig& config,
                      const std::filesystem::path& dir) {
  write_text_file(dir / "run_report.json", run_report_json(report, config));
  write_text_file(dir / "frames.csv", run_report_csv(report));
}

}  // namespace smagg
