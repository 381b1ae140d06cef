#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mecoff/channel.hpp"
#include "mecoff/optimizer.hpp"
#include "mecoff/trajectory.hpp"

namespace mecoff {

/// Uniform range; min == max means a fixed value.
struct ParamRange {
  double min = 0.0;
  double max = 0.0;
};

enum class SeSourceKind { Constant, Table, Trajectory };
enum class VelocityMode { Instantaneous, Smoothed, Predicted };

struct SeSourceConfig {
  SeSourceKind kind = SeSourceKind::Table;
  double constant_se = 4.0;
  // "zak", "sfft" or a CSV path (relative paths resolve against the config file).
  std::string table = "zak";
  ParamRange velocity_mps{5.0, 35.0};  // sampled per device for kind == Table
  VelocityMode velocity_mode = VelocityMode::Smoothed;  // kind == Trajectory
};

struct KoopmanConfig {
  std::size_t embed_dim = 8;
  bool remove_mean = true;
  double train_fraction = 0.8;
  bool position_latlon = false;  // fit lat and lon instead of the bearing phi
};

struct ScenarioConfig {
  std::uint32_t n_users = 10;
  std::uint32_t k_tasks = 100;
  std::optional<std::uint64_t> rng_seed = 20241015;

  ParamRange data_bits{1e5, 1e7};
  ParamRange cycles_per_bit{500.0, 2000.0};
  ParamRange cpu_hz{0.5e9, 2e9};
  ParamRange energy_coeff{1e-27, 1e-27};
  ParamRange bandwidth_hz{1e6, 2e7};
  ParamRange noise_var{1e-9, 1e-9};
  ParamRange channel_gain{1.0, 1.0};

  SeSourceConfig se_source;
  double carrier_hz = SeModel::kDefaultCarrierHz;

  double greedy_step = kDefaultGreedyStep;
  std::uint32_t pool_threshold = 0;  // device requests accepted before optimizing; 0 = all

  std::filesystem::path trip_file;
  VedColumns ved_columns;
  GapBounds gap_bounds;
  BaseStationGeom base_station{42.2808, -83.7430, 3000.0};
  KoopmanConfig koopman;
};

/// Reads a JSON scenario document. Unknown keys and invalid values raise
/// ConfigError naming the field. Relative paths resolve against the file's
/// directory. Keys absent from the document keep their defaults.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Throws ConfigError on nonpositive or inverted ranges, a missing seed for a
/// randomized scenario, and similar.
void validate(const ScenarioConfig& config);

/// The SE curve named by se_source.table.
SeModel resolve_se_model(const ScenarioConfig& config);

std::string_view to_string(VelocityMode mode);

/// A seeded problem instance. Parameters are drawn in a fixed order (per
/// device: cpu, energy coefficient, bandwidth, noise, gain, velocity; then per
/// task: bits, cycles/bit), always drawing even for fixed ranges, so a given
/// seed yields the same instance whatever else changes.
struct Scenario {
  TaskPool pool;
  std::vector<double> velocity_mps;  // per device, in pool order
};

Scenario build_scenario(const ScenarioConfig& config);

/// Speed fed into the SE curve for a device following `trip`.
double trip_velocity(const Trip& trip, VelocityMode mode, const GapBounds& bounds,
                     const KoopmanConfig& koopman);

enum class SweepAxis { Velocity, Bandwidth, DataSize };

SweepAxis parse_axis(std::string_view text);
std::string_view to_string(SweepAxis axis);

/// Copy of `base` with one axis overridden on every device/task: velocity sets
/// se = calc_se(model, value); bandwidth sets W; datasize scales every D.
/// Velocity must be non-negative, the other axes strictly positive.
TaskPool apply_axis(const TaskPool& base, SweepAxis axis, double value, const SeModel& model);

}  // namespace mecoff
