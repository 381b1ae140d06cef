#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mecoff/errors.hpp"
#include "mecoff/scenario.hpp"

using namespace mecoff;

namespace {

const std::filesystem::path kConfigDir = MECOFF_CONFIG_DIR;
const std::filesystem::path kDataDir = MECOFF_DATA_DIR;

bool same_range(const ParamRange& a, const ParamRange& b) { return a.min == b.min && a.max == b.max; }

}  // namespace

TEST(Config, ShippedDefaultMatchesBuiltinDefaults) {
  const auto file = load_config(kConfigDir / "default_scenario.json");
  const ScenarioConfig builtin;
  EXPECT_EQ(file.n_users, builtin.n_users);
  EXPECT_EQ(file.k_tasks, builtin.k_tasks);
  EXPECT_EQ(file.rng_seed, builtin.rng_seed);
  EXPECT_TRUE(same_range(file.data_bits, builtin.data_bits));
  EXPECT_TRUE(same_range(file.cycles_per_bit, builtin.cycles_per_bit));
  EXPECT_TRUE(same_range(file.cpu_hz, builtin.cpu_hz));
  EXPECT_TRUE(same_range(file.energy_coeff, builtin.energy_coeff));
  EXPECT_TRUE(same_range(file.bandwidth_hz, builtin.bandwidth_hz));
  EXPECT_TRUE(same_range(file.noise_var, builtin.noise_var));
  EXPECT_TRUE(same_range(file.channel_gain, builtin.channel_gain));
  EXPECT_TRUE(same_range(file.se_source.velocity_mps, builtin.se_source.velocity_mps));
  EXPECT_EQ(file.se_source.table, builtin.se_source.table);
  EXPECT_EQ(file.greedy_step, builtin.greedy_step);
  EXPECT_EQ(file.base_station.radius_m, builtin.base_station.radius_m);
  EXPECT_EQ(file.koopman.embed_dim, builtin.koopman.embed_dim);
  EXPECT_EQ(file.trip_file, (kDataDir / "ved_sample.csv").lexically_normal());
}

TEST(Config, ErrorsNameTheField) {
  auto expect_field = [](const std::string& json, const std::string& field) {
    try {
      validate(parse_config(json));
      FAIL() << json;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  expect_field(R"({"rng_seed": 1, "bogus": 3})", "bogus");
  expect_field(R"({"rng_seed": 1, "data_bits": {"min": 5, "max": 1}})", "data_bits");
  expect_field(R"({"rng_seed": 1, "cpu_hz": -1})", "cpu_hz");
  expect_field(R"({"rng_seed": 1, "channel_gain": {"min": 0.5, "max": 1.5}})", "channel_gain");
  expect_field(R"({"rng_seed": 1, "n_users": 0})", "n_users");
  expect_field(R"({"rng_seed": 1, "se_source": {"kind": "magic"}})", "se_source.kind");
  expect_field(R"({"rng_seed": 1, "koopman": {"train_fraction": 1.5}})", "koopman.train_fraction");
  expect_field(R"({"n_users": 2})", "rng_seed");
  expect_field(R"({"rng_seed": -4})", "rng_seed");
  expect_field("not json", "JSON");
}

TEST(Config, FixedScenarioNeedsNoSeed) {
  const auto c = parse_config(R"({
    "data_bits": 1e6, "cycles_per_bit": 1000, "cpu_hz": 1e9, "bandwidth_hz": 1e6,
    "se_source": {"kind": "constant", "constant_se": 4}})");
  EXPECT_FALSE(c.rng_seed);
  EXPECT_NO_THROW(validate(c));
  const auto s = build_scenario(c);
  EXPECT_EQ(s.pool.task_count(), 1000u);
  for (const auto& [id, e] : s.pool.devices) {
    EXPECT_EQ(e.se, 4.0);
    EXPECT_EQ(e.device.cpu_hz, 1e9);
    EXPECT_EQ(e.tasks[0].data_bits, 1e6);
  }
}

TEST(Scenario, DeterministicAndWithinRanges) {
  ScenarioConfig c;
  c.n_users = 5;
  c.k_tasks = 7;
  const auto a = build_scenario(c);
  const auto b = build_scenario(c);
  ASSERT_EQ(a.pool.devices.size(), 5u);
  for (const auto& [id, e] : a.pool.devices) {
    const auto& f = b.pool.devices.at(id);
    EXPECT_EQ(e.device.cpu_hz, f.device.cpu_hz);
    EXPECT_EQ(e.se, f.se);
    EXPECT_EQ(e.tasks.size(), 7u);
    EXPECT_GE(e.device.cpu_hz, c.cpu_hz.min);
    EXPECT_LE(e.device.cpu_hz, c.cpu_hz.max);
    EXPECT_GE(e.device.bandwidth_hz, c.bandwidth_hz.min);
    EXPECT_LE(e.device.bandwidth_hz, c.bandwidth_hz.max);
    for (std::size_t k = 0; k < e.tasks.size(); ++k) {
      EXPECT_EQ(e.tasks[k].data_bits, f.tasks[k].data_bits);
      EXPECT_GE(e.tasks[k].data_bits, c.data_bits.min);
      EXPECT_LE(e.tasks[k].data_bits, c.data_bits.max);
    }
  }
  c.rng_seed = 99;
  const auto other = build_scenario(c);
  EXPECT_NE(other.pool.devices.at(0).device.cpu_hz, a.pool.devices.at(0).device.cpu_hz);
}

TEST(Scenario, FixingAParameterDoesNotResampleOthers) {
  ScenarioConfig c;
  c.n_users = 3;
  c.k_tasks = 4;
  const auto base = build_scenario(c);
  c.bandwidth_hz = {5e6, 5e6};
  const auto fixed = build_scenario(c);
  for (const auto& [id, e] : base.pool.devices) {
    const auto& f = fixed.pool.devices.at(id);
    EXPECT_EQ(f.device.bandwidth_hz, 5e6);
    EXPECT_EQ(e.device.cpu_hz, f.device.cpu_hz);
    EXPECT_EQ(e.tasks.back().cycles_per_bit, f.tasks.back().cycles_per_bit);
  }
}

TEST(Scenario, PoolThresholdAdmitsFirstRequests) {
  ScenarioConfig c;
  c.n_users = 6;
  c.k_tasks = 2;
  const auto all = build_scenario(c);
  c.pool_threshold = 4;
  const auto some = build_scenario(c);
  ASSERT_EQ(some.pool.devices.size(), 4u);
  for (const auto& [id, e] : some.pool.devices) {
    EXPECT_EQ(e.device.cpu_hz, all.pool.devices.at(id).device.cpu_hz);
  }
}

TEST(Scenario, TrajectoryDrivenSe) {
  ScenarioConfig c;
  c.n_users = 6;
  c.k_tasks = 2;
  c.trip_file = kDataDir / "ved_sample.csv";
  c.se_source.kind = SeSourceKind::Trajectory;
  const auto zak = SeModel::builtin_zak();
  for (auto mode : {VelocityMode::Instantaneous, VelocityMode::Smoothed, VelocityMode::Predicted}) {
    c.se_source.velocity_mode = mode;
    const auto s = build_scenario(c);
    ASSERT_EQ(s.velocity_mps.size(), 6u);
    std::size_t i = 0;
    for (const auto& [id, e] : s.pool.devices) {
      EXPECT_GE(s.velocity_mps[i], 0.0);
      EXPECT_LT(s.velocity_mps[i], 40.0) << to_string(mode);
      EXPECT_DOUBLE_EQ(e.se, calc_se(zak, s.velocity_mps[i]));
      ++i;
    }
    // Device 4 reuses trip 0 (4 trips in the sample).
    EXPECT_EQ(s.velocity_mps[4], s.velocity_mps[0]);
  }
}

TEST(TripVelocity, ModesOnConstantSpeedTrip) {
  Trip trip{"t", {}};
  for (int i = 0; i < 30; ++i) {
    trip.samples.push_back({i * 2000, 42.0 + i * 20.0 / kEarthRadiusM * 180.0 / M_PI, -83.0});
  }
  KoopmanConfig k;
  for (auto mode : {VelocityMode::Instantaneous, VelocityMode::Smoothed, VelocityMode::Predicted}) {
    EXPECT_NEAR(trip_velocity(trip, mode, {}, k), 10.0, 1e-6) << to_string(mode);
  }
  Trip short_trip{"s", {trip.samples.begin(), trip.samples.begin() + 5}};
  EXPECT_THROW(trip_velocity(short_trip, VelocityMode::Predicted, {}, k), ConfigError);
}

TEST(ApplyAxis, OverridesOnlyTheAxis) {
  ScenarioConfig c;
  c.n_users = 2;
  c.k_tasks = 3;
  const auto s = build_scenario(c);
  const auto zak = SeModel::builtin_zak();

  const auto bw = apply_axis(s.pool, SweepAxis::Bandwidth, 7e6, zak);
  const auto vel = apply_axis(s.pool, SweepAxis::Velocity, 60.0, zak);
  const auto ds = apply_axis(s.pool, SweepAxis::DataSize, 2.0, zak);
  for (const auto& [id, e] : s.pool.devices) {
    EXPECT_EQ(bw.devices.at(id).device.bandwidth_hz, 7e6);
    EXPECT_EQ(bw.devices.at(id).se, e.se);
    EXPECT_EQ(vel.devices.at(id).se, calc_se(zak, 60.0));
    EXPECT_EQ(vel.devices.at(id).device.bandwidth_hz, e.device.bandwidth_hz);
    for (std::size_t k = 0; k < e.tasks.size(); ++k) {
      EXPECT_EQ(ds.devices.at(id).tasks[k].data_bits, 2.0 * e.tasks[k].data_bits);
    }
  }
  EXPECT_THROW(apply_axis(s.pool, SweepAxis::Bandwidth, 0.0, zak), ConfigError);
  EXPECT_THROW(apply_axis(s.pool, SweepAxis::Velocity, -1.0, zak), ConfigError);
  EXPECT_NO_THROW(apply_axis(s.pool, SweepAxis::Velocity, 0.0, zak));
  EXPECT_THROW(parse_axis("power"), ConfigError);
}
