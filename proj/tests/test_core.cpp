#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "smagg/core.hpp"

namespace smagg {
namespace {

TEST(FixedPointTest, EncodesScaledValues) {
  EXPECT_EQ(fixed_point_encode(1234.0, 1000), 1234000u);
  EXPECT_EQ(fixed_point_encode(0.0, 1000), 0u);
  EXPECT_EQ(fixed_point_encode(0.0005, 1000), 1u);
  EXPECT_EQ(fixed_point_encode(0.0004, 1000), 0u);
  EXPECT_EQ(fixed_point_encode(2.5, 1), 3u);
}

TEST(FixedPointTest, RejectsNegativeAndOversizedValues) {
  try {
    fixed_point_encode(-0.001, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeReading);
  }
  try {
    fixed_point_encode(static_cast<double>(kRawBound) / 1000.0, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
  EXPECT_EQ(fixed_point_encode(static_cast<double>(kRawBound - 1), 1), kRawBound - 1);
}

TEST(FixedPointTest, DecimalStringsRoundHalfUp) {
  EXPECT_EQ(fixed_point_encode(std::string_view("1234.0"), 1000), 1234000u);
  EXPECT_EQ(fixed_point_encode(std::string_view("0.0005"), 1000), 1u);
  EXPECT_EQ(fixed_point_encode(std::string_view("0.00049999"), 1000), 0u);
  EXPECT_EQ(fixed_point_encode(std::string_view(" 12.3456 "), 100), 1235u);
  EXPECT_EQ(fixed_point_encode(std::string_view("7"), 10), 70u);
  EXPECT_EQ(fixed_point_encode(std::string_view(".5"), 1), 1u);
  EXPECT_EQ(fixed_point_encode(std::string_view("-0"), 1000), 0u);
  EXPECT_THROW(fixed_point_encode(std::string_view("-1.0"), 1000), Error);
  EXPECT_THROW(fixed_point_encode(std::string_view("1.2.3"), 1000), Error);
  EXPECT_THROW(fixed_point_encode(std::string_view("abc"), 1000), Error);
  EXPECT_THROW(fixed_point_encode(std::string_view("99999999999999999999"), 1000), Error);
}

TEST(FixedPointTest, MonotoneAndWithinHalfUnit) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  for (std::int64_t scale : {1, 10, 100, 1000}) {
    std::vector<double> values(2000);
    for (auto& v : values) v = dist(rng);
    std::sort(values.begin(), values.end());
    std::uint64_t previous = 0;
    for (double v : values) {
      const std::uint64_t raw = fixed_point_encode(v, scale);
      EXPECT_GE(raw, previous);
      previous = raw;
      EXPECT_LE(std::abs(fixed_point_decode(static_cast<std::int64_t>(raw), scale) - v),
                0.5 / static_cast<double>(scale) + 1e-9);
    }
  }
}

TEST(RegistryTest, OddCountsPassThrough) {
  const Registry r = build_registry(3);
  EXPECT_EQ(r.effective_n(), 3u);
  EXPECT_FALSE(r.has_dummy());
  EXPECT_EQ(build_registry(1).effective_n(), 1u);
}

TEST(RegistryTest, EvenCountsGainADummyAtTheHighestIndex) {
  const Registry r = build_registry(4);
  EXPECT_EQ(r.effective_n(), 5u);
  ASSERT_TRUE(r.has_dummy());
  EXPECT_TRUE(r.meter(5).is_dummy);
  EXPECT_EQ(r.meter(5).index, 5u);
  for (std::uint32_t i = 1; i <= 4; ++i) EXPECT_FALSE(r.meter(i).is_dummy);
}

TEST(RegistryTest, EffectiveCountIsAlwaysOdd) {
  for (std::uint32_t n = 1; n <= 2000; ++n) {
    const Registry r = build_registry(n);
    EXPECT_EQ(r.effective_n() % 2, 1u);
    EXPECT_EQ(r.effective_n(), n % 2 ? n : n + 1);
    int dummies = 0;
    for (const MeterId& m : r.meters()) dummies += m.is_dummy;
    EXPECT_LE(dummies, 1);
  }
  EXPECT_THROW(build_registry(0), Error);
}

TEST(EpochConfigTest, Validation) {
  EpochConfig e;
  e.n_registered = 3;
  e.m = 4;
  e.timestamps = cadence_timestamps(4, 60);
  EXPECT_NO_THROW(e.validate());

  EpochConfig odd_high = e;
  odd_high.mode = Mode::HighFrequency;
  odd_high.m = 3;
  odd_high.timestamps = cadence_timestamps(3, 60);
  EXPECT_THROW(odd_high.validate(), Error);

  EpochConfig bad_scale = e;
  bad_scale.scale = 5;
  EXPECT_THROW(bad_scale.validate(), Error);

  EpochConfig short_ts = e;
  short_ts.timestamps.pop_back();
  EXPECT_THROW(short_ts.validate(), Error);

  EpochConfig no_meters = e;
  no_meters.n_registered = 0;
  EXPECT_THROW(no_meters.validate(), Error);
}

}  // namespace
}  // namespace smagg
