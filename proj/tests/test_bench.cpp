#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "smagg/bench.hpp"
#include "smagg/netsim.hpp"
#include "smagg/report.hpp"
#include "test_support.hpp"

namespace smagg {
namespace {

using nlohmann::json;

std::string type_name(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  return "compound";
}

// Structure of a document: leaves become their type, array elements are
// merged, so nullable fields read "null|string".
json skeleton(const json& j);

json merge(const json& a, const json& b) {
  if (a.is_null()) return b;
  if (a.is_object() && b.is_object()) {
    json out = a;
    for (const auto& [k, v] : b.items()) out[k] = out.contains(k) ? merge(out[k], v) : v;
    return out;
  }
  if (a.is_array() && b.is_array()) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return json::array({merge(a[0], b[0])});
  }
  std::set<std::string> parts;
  for (const json* side : {&a, &b}) {
    std::stringstream s(side->get<std::string>());
    for (std::string p; std::getline(s, p, '|');) parts.insert(p);
  }
  std::string joined;
  for (const std::string& p : parts) joined += (joined.empty() ? "" : "|") + p;
  return joined;
}

json skeleton(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = skeleton(v);
    return out;
  }
  if (j.is_array()) {
    json acc;
    for (const json& e : j) acc = merge(acc, skeleton(e));
    return acc.is_null() ? json::array() : json::array({acc});
  }
  return type_name(j);
}

json load_golden(const char* name) {
  std::ifstream in(std::string(SMAGG_GOLDEN_DIR) + "/" + name);
  return json::parse(in);
}

TEST(SummarizeTest, TrimsBothTails) {
  std::vector<double> samples(100, 1.0);
  samples[0] = 1000.0;
  samples[1] = -1000.0;
  const TimingStats s = summarize(samples);
  EXPECT_DOUBLE_EQ(s.mean_ms, 1.0);
  EXPECT_DOUBLE_EQ(s.std_ms, 0.0);
  EXPECT_EQ(s.samples, 98u);
}

TEST(SummarizeTest, MeanAndSpread) {
  const TimingStats s = summarize({1.0, 2.0, 3.0, 4.0}, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_ms, 2.5);
  EXPECT_NEAR(s.std_ms, std::sqrt(5.0 / 3.0), 1e-12);
}

TEST(WilsonTest, KnownValues) {
  // 50/100: centre 0.5, half-width 0.0961...
  const Interval a = wilson_interval(50, 100);
  EXPECT_NEAR(a.low, 0.403831, 1e-5);
  EXPECT_NEAR(a.high, 0.596169, 1e-5);
  const Interval b = wilson_interval(0, 1000);
  EXPECT_NEAR(b.low, 0.0, 1e-12);
  EXPECT_NEAR(b.high, 0.003826, 1e-5);
  const Interval c = wilson_interval(1000, 1000);
  EXPECT_NEAR(c.low, 0.996174, 1e-5);
  EXPECT_NEAR(c.high, 1.0, 1e-12);
}

TEST(BenchTest, RefusesTooFewRepetitions) {
  BenchOptions options;
  options.repetitions = 1;
  try {
    run_bench(options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(BenchTest, JsonSchemaMatchesGolden) {
  BenchOptions options;
  options.hashes = {HashAlg::Sha256};
  options.aes = {AesBits::Aes128};
  options.frames = 16;
  const BenchReport report = run_bench(options);
  EXPECT_EQ(report.repetitions, kMinRepetitions);
  ASSERT_EQ(report.iter.size(), 1u);
  EXPECT_EQ(report.iter[0].rls.samples, kMinRepetitions * 98 / 100);
  EXPECT_GT(report.iter[0].rls.mean_ms, 0.0);
  EXPECT_EQ(skeleton(json::parse(bench_json(report))), load_golden("bench_schema.json"));
  const std::string csv = bench_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "phase,config,scheme,mean_ms,std_ms,samples");
}

TEST(AttackEvalTest, RefusesTooFewTrials) {
  const ScenarioConfig cfg = testing::make_scenario(testing::make_epoch(Mode::LowFrequency, 3, 8), 1);
  EXPECT_THROW(attack_eval(cfg, 999), Error);
}

TEST(AttackEvalTest, RowsMatchExpectations) {
  const ScenarioConfig cfg = testing::make_scenario(testing::make_epoch(Mode::HighFrequency, 3, 40), 1);
  const auto rows = attack_eval(cfg, kMinTrials);
  ASSERT_EQ(rows.size(), 11u);
  for (const AttackRow& row : rows) {
    EXPECT_GE(row.trials, kMinTrials) << row.name;
    EXPECT_LE(row.ci.low, row.rate);
    EXPECT_GE(row.ci.high, row.rate);
    EXPECT_TRUE(row.ci.low <= row.expected && row.expected <= row.ci.high) << row.name << " " << row.rate;
  }
  EXPECT_EQ(json::parse(attack_json(rows)).size(), 11u);
}

TEST(RunReportTest, JsonSchemaMatchesGolden) {
  ScenarioConfig cfg = testing::make_scenario(testing::make_epoch(Mode::LowFrequency, 3, 12), 4);
  AdversaryScript s;
  s.action = AttackKind::ModifyAdd;
  s.link = Link::DaToCc;
  s.delta = 1;
  s.frames = {2, 0, 1.0};
  cfg.adversaries.push_back(s);
  const RunReport report = run_epoch(cfg);
  EXPECT_EQ(skeleton(json::parse(run_report_json(report, cfg))), load_golden("run_report_schema.json"));
  const std::string csv = run_report_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frame,timestamp,attacked,status,reason,recovered_raw,truth_raw");
  EXPECT_NE(csv.find("\n1,0,1,rejected,TamperDetected,,"), std::string::npos);
  EXPECT_NE(csv.find("\n2,3600,0,accepted,,"), std::string::npos);
}

}  // namespace
}  // namespace smagg
