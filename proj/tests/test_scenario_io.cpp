#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "smagg/netsim.hpp"
#include "smagg/scenario_io.hpp"
#include "test_support.hpp"

namespace smagg {
namespace {

using testing::make_epoch;

ErrorCode code_of_csv(std::string_view text, const EpochConfig& epoch, std::string* message = nullptr) {
  try {
    parse_csv(text, epoch);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "CSV accepted";
  return ErrorCode::Precondition;
}

ErrorCode code_of_config(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted: " << text;
  return ErrorCode::Precondition;
}

TEST(CsvTest, WellFormed) {
  const EpochConfig epoch = make_epoch(Mode::LowFrequency, 2, 2);
  const TraceTable t = parse_csv(
      "meter_id,timestamp,energy\n"
      "1,3600,1.5\n"
      "2,0,0.25\n"
      "1,0,2\n"
      "2,3600,0.0005\n",
      epoch);
  EXPECT_EQ(t.timestamps(), (std::vector<std::uint64_t>{0, 3600}));
  EXPECT_EQ(t.reading(1, 1), 2000u);
  EXPECT_EQ(t.reading(1, 2), 1500u);
  EXPECT_EQ(t.reading(2, 1), 250u);
  EXPECT_EQ(t.reading(2, 2), 1u);
  EXPECT_EQ(t.effective_n(), 3u);
  EXPECT_EQ(t.reading(3, 1), 0u);
  EXPECT_EQ(t.truth(1), 2250);
}

TEST(CsvTest, ExtraTimestampsAreIgnored) {
  const EpochConfig epoch = make_epoch(Mode::LowFrequency, 1, 2);
  const TraceTable t = parse_csv("meter_id,timestamp,energy\n1,30,1\n1,10,2\n1,20,3\n", epoch);
  EXPECT_EQ(t.timestamps(), (std::vector<std::uint64_t>{10, 20}));
  EXPECT_EQ(t.reading(1, 1), 2000u);
}

TEST(CsvTest, MissingCellNamesMeterAndFrame) {
  const EpochConfig epoch = make_epoch(Mode::LowFrequency, 2, 2);
  std::string message;
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0,1\n2,0,1\n1,60,1\n", epoch, &message),
            ErrorCode::MissingCell);
  EXPECT_NE(message.find("meter 2 frame 2"), std::string::npos) << message;
}

TEST(CsvTest, Rejections) {
  const EpochConfig epoch = make_epoch(Mode::LowFrequency, 1, 1);
  std::string message;
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0,-1.0\n", epoch, &message), ErrorCode::NegativeReading);
  EXPECT_NE(message.find("row 2"), std::string::npos) << message;
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0,abc\n", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("meter,timestamp,energy\n1,0,1\n", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0\n", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n2,0,1\n", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0,1\n1,0,2\n", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("", epoch), ErrorCode::ParseError);
  EXPECT_EQ(code_of_csv("meter_id,timestamp,energy\n1,0,2000000000\n", epoch), ErrorCode::Overflow);
}

TEST(ConfigTest, ParsesKeys) {
  const ScenarioConfig c = parse_config(
      "# comment\n"
      "mode = high\n"
      "meters = 7\n"
      "frames = 60   # pairs\n"
      "hash = sha512\n"
      "aes = 256\n"
      "seed = 9\n"
      "freshness = off\n"
      "attack = modify_add\n"
      "attack_link = da_cc\n"
      "attack_every = 2\n"
      "attack_offset = 1\n"
      "attack_delta = -1\n");
  EXPECT_EQ(c.epoch.mode, Mode::HighFrequency);
  EXPECT_EQ(c.epoch.n_registered, 7u);
  EXPECT_EQ(c.epoch.m, 60u);
  EXPECT_EQ(c.epoch.hash_alg, HashAlg::Sha512);
  EXPECT_EQ(c.epoch.aes_bits, AesBits::Aes256);
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_FALSE(c.check_freshness);
  EXPECT_EQ(c.epoch.timestamps[1], kMinuteInterval);
  ASSERT_EQ(c.adversaries.size(), 1u);
  EXPECT_EQ(c.adversaries[0].delta, ~std::uint64_t{0});
  EXPECT_EQ(c.adversaries[0].frames.every, 2u);
}

TEST(ConfigTest, Rejections) {
  EXPECT_EQ(code_of_config("meters = three\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("colour = red\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("meters = 1\nmeters = 2\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("just text\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("mode = high\nframes = 5\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("scale = 7\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("meters = 0\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("data = csv\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("attack = teleport\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("attack = bitflip\nattack_link = da_cc\nattack_bit = 64\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("attack = inject\nattack_payload = 0011\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("attack = drop\nattack_every = 2\nattack_offset = 2\n"), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of_config("synth_max_raw = 1099511627776\n"), ErrorCode::ConfigInvalid);
}

TEST(ConfigTest, ShippedConfigsLoad) {
  for (const char* name : {"low_clean.conf", "high_odd_tamper.conf"}) {
    const ScenarioConfig c = load_config(std::filesystem::path(SMAGG_CONFIG_DIR) / name);
    EXPECT_NO_THROW(run_epoch(c)) << name;
  }
}

TEST(ConfigTest, CsvPathResolvesAgainstConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "smagg_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "trace.csv") << "meter_id,timestamp,energy\n1,0,1.5\n1,60,2.5\n";
    std::ofstream(dir / "run.conf") << "meters = 1\nframes = 2\ndata = csv\ncsv_path = trace.csv\n";
  }
  const ScenarioConfig c = load_config(dir / "run.conf");
  const RunReport r = run_epoch(c);
  EXPECT_EQ(r.frames[0].recovered, 1500);
  EXPECT_EQ(r.frames[1].recovered, 2500);
  EXPECT_EQ(r.frames[1].timestamp, 60u);
  std::filesystem::remove_all(dir);
}

TEST(SynthTest, DeterministicBoundedAndDummyZero) {
  const EpochConfig epoch = make_epoch(Mode::LowFrequency, 4, 48);
  const SyntheticParams params = SyntheticParams::low_frequency(epoch.scale);
  const TraceTable a = synth_trace(11, epoch, params);
  EXPECT_EQ(a, synth_trace(11, epoch, params));
  EXPECT_NE(a, synth_trace(12, epoch, params));
  ASSERT_EQ(a.effective_n(), 5u);
  bool varied = false;
  for (std::uint32_t j = 1; j <= 48; ++j) {
    for (std::uint32_t i = 1; i <= 4; ++i) {
      EXPECT_LE(a.reading(i, j), params.max_raw);
      varied |= a.reading(i, j) != a.reading(i, 1);
    }
    EXPECT_EQ(a.reading(5, j), 0u);
  }
  EXPECT_TRUE(varied);
  EXPECT_THROW(synth_trace(1, epoch, SyntheticParams{kRawBound, 60, 0.1}), Error);
}

}  // namespace
}  // namespace smagg
