// smagg: run protocol scenarios, evaluate attacks, benchmark the meter phase.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smagg/bench.hpp"
#include "smagg/netsim.hpp"
#include "smagg/report.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUndetectedCorruption = 1;
constexpr int kConfigError = 2;
constexpr int kPreconditionError = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int exit_code_for(const smagg::Error& e) {
  switch (e.code()) {
    case smagg::ErrorCode::ConfigInvalid:
    case smagg::ErrorCode::ParseError:
    case smagg::ErrorCode::MissingCell:
    case smagg::ErrorCode::NegativeReading:
    case smagg::ErrorCode::Overflow:
      return kConfigError;
    default:
      return kPreconditionError;
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  smagg::ScenarioConfig config = smagg::load_config(config_path);
  if (!out_dir.empty()) config.out_dir = out_dir;
  const smagg::RunReport report = smagg::run_epoch(config);

  std::cout << "frames: " << report.frames_total << "  attacked: " << report.frames_attacked
            << "  detected: " << report.frames_detected
            << "  undetected: " << report.frames_corrupted_undetected
            << "  silent corruption: " << report.frames_silent_corruption << "\n";
  for (const auto& [reason, count] : report.rejections) std::cout << "  rejected " << reason << ": " << count << "\n";
  if (config.out_dir) {
    smagg::write_run_report(report, config, *config.out_dir);
    std::cout << "reports written to " << config.out_dir->string() << "\n";
  }
  return report.frames_silent_corruption == 0 ? kOk : kUndetectedCorruption;
}

int cmd_bench(const std::string& hashes, const std::string& aes, std::uint32_t reps, std::uint32_t frames,
              const std::string& out_dir) {
  smagg::BenchOptions options;
  options.hashes.clear();
  options.aes.clear();
  for (const auto& h : split_list(hashes)) options.hashes.push_back(smagg::parse_hash_alg(h));
  for (const auto& a : split_list(aes)) options.aes.push_back(smagg::parse_aes_bits(a));
  options.repetitions = reps;
  options.frames = frames;
  const smagg::BenchReport report = smagg::run_bench(options);
  std::cout << smagg::bench_table(report);
  if (!out_dir.empty()) {
    smagg::write_text_file(std::filesystem::path(out_dir) / "bench_report.json", smagg::bench_json(report));
    smagg::write_text_file(std::filesystem::path(out_dir) / "bench_report.csv", smagg::bench_csv(report));
  }
  return kOk;
}

int cmd_attack_eval(const std::string& config_path, std::uint32_t trials, const std::string& out_dir) {
  const smagg::ScenarioConfig config = smagg::load_config(config_path);
  const auto rows = smagg::attack_eval(config, trials);
  std::cout << smagg::attack_table(rows);
  if (!out_dir.empty()) {
    smagg::write_text_file(std::filesystem::path(out_dir) / "attack_eval.json", smagg::attack_json(rows));
    smagg::write_text_file(std::filesystem::path(out_dir) / "attack_eval.csv", smagg::attack_csv(rows));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving smart-meter aggregation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one epoch of a scenario");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Directory for run_report.json and frames.csv");

  std::string hashes = "sha224,sha256,sha512";
  std::string aes = "128,192,256";
  std::uint32_t reps = smagg::kMinRepetitions;
  std::uint32_t frames = 1024;
  auto* bench = app.add_subcommand("bench", "Time initialization and per-frame meter work");
  bench->add_option("--hash", hashes, "Comma-separated hash algorithms");
  bench->add_option("--aes", aes, "Comma-separated AES key sizes");
  bench->add_option("--reps", reps, "Repetitions (>= 1000)");
  bench->add_option("--frames", frames, "Frames covered by the timed watermark generation");
  bench->add_option("--out", out_dir, "Directory for bench_report.json and bench_report.csv");

  std::uint32_t trials = smagg::kMinTrials;
  auto* attack = app.add_subcommand("attack-eval", "Detection rates per adversary class");
  attack->add_option("--config", config_path, "Base scenario config file")->required();
  attack->add_option("--trials", trials, "Attacked frames per class (>= 1000)");
  attack->add_option("--out", out_dir, "Directory for attack_eval.json and attack_eval.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*bench) return cmd_bench(hashes, aes, reps, frames, out_dir);
    if (*attack) return cmd_attack_eval(config_path, trials, out_dir);
  } catch (const smagg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPreconditionError;
  }
  return kOk;
}
