#include "mecoff/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mecoff/errors.hpp"
#include "mecoff/koopman.hpp"

namespace mecoff {
namespace {

using Json = nlohmann::json;

// Portable uniform draw in [0, 1): std::uniform_real_distribution output is
// implementation-defined.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double draw(std::mt19937_64& rng, const ParamRange& r) {
  const double u = unit_draw(rng);
  return r.min == r.max ? r.min : r.min + (r.max - r.min) * u;
}

void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown key");
    }
  }
}

const Json& require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field + ": expected an object");
  return j;
}

double get_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  return j.get<double>();
}

template <typename Int>
Int get_unsigned(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ConfigError(field + ": expected a nonnegative integer");
  }
  const auto v = j.get<std::uint64_t>();
  if (v > std::numeric_limits<Int>::max()) throw ConfigError(field + ": value too large");
  return static_cast<Int>(v);
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field + ": expected a string");
  return j.get<std::string>();
}

bool get_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) throw ConfigError(field + ": expected true or false");
  return j.get<bool>();
}

ParamRange get_range(const Json& j, const std::string& field) {
  if (j.is_number()) {
    const double v = j.get<double>();
    return {v, v};
  }
  require_object(j, field);
  reject_unknown(j, field, {"min", "max"});
  if (!j.contains("min") || !j.contains("max")) throw ConfigError(field + ": needs min and max");
  return {get_number(j["min"], field + ".min"), get_number(j["max"], field + ".max")};
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base_dir) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path.string();
  return (base_dir / path).lexically_normal().string();
}

void check_range(const ParamRange& r, const std::string& field, bool allow_zero = false) {
  const bool lower_ok = allow_zero ? r.min >= 0.0 : r.min > 0.0;
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || !lower_ok) {
    throw ConfigError(field + ": range must be finite and " + (allow_zero ? ">= 0" : "> 0"));
  }
  if (r.min > r.max) throw ConfigError(field + ": min must not exceed max");
}

bool randomized(const ParamRange& r) { return r.min != r.max; }

}  // namespace

std::string_view to_string(VelocityMode mode) {
  switch (mode) {
    case VelocityMode::Instantaneous: return "instantaneous";
    case VelocityMode::Smoothed: return "smoothed";
    case VelocityMode::Predicted: return "predicted";
  }
  return "unknown";
}

ScenarioConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "",
                 {"n_users", "k_tasks", "rng_seed", "data_bits", "cycles_per_bit", "cpu_hz",
                  "energy_coeff", "bandwidth_hz", "noise_var", "channel_gain", "se_source",
                  "carrier_hz", "greedy_step", "pool_threshold", "trip_file", "ved_columns",
                  "gap_bounds_ms", "base_station", "koopman", "description"});

  ScenarioConfig c;
  if (doc.contains("n_users")) c.n_users = get_unsigned<std::uint32_t>(doc["n_users"], "n_users");
  if (doc.contains("k_tasks")) c.k_tasks = get_unsigned<std::uint32_t>(doc["k_tasks"], "k_tasks");
  if (doc.contains("rng_seed")) {
    c.rng_seed = doc["rng_seed"].is_null()
                     ? std::nullopt
                     : std::optional(get_unsigned<std::uint64_t>(doc["rng_seed"], "rng_seed"));
  } else {
    c.rng_seed.reset();
  }

  const std::pair<const char*, ParamRange*> ranges[] = {
      {"data_bits", &c.data_bits},       {"cycles_per_bit", &c.cycles_per_bit},
      {"cpu_hz", &c.cpu_hz},             {"energy_coeff", &c.energy_coeff},
      {"bandwidth_hz", &c.bandwidth_hz}, {"noise_var", &c.noise_var},
      {"channel_gain", &c.channel_gain}};
  for (const auto& [key, target] : ranges) {
    if (doc.contains(key)) *target = get_range(doc[key], key);
  }

  if (doc.contains("se_source")) {
    const auto& s = require_object(doc["se_source"], "se_source");
    reject_unknown(s, "se_source", {"kind", "constant_se", "table", "velocity_mps", "velocity_mode"});
    if (s.contains("kind")) {
      const auto kind = get_string(s["kind"], "se_source.kind");
      if (kind == "constant") c.se_source.kind = SeSourceKind::Constant;
      else if (kind == "table") c.se_source.kind = SeSourceKind::Table;
      else if (kind == "trajectory") c.se_source.kind = SeSourceKind::Trajectory;
      else throw ConfigError("se_source.kind: expected constant, table or trajectory");
    }
    if (s.contains("constant_se")) c.se_source.constant_se = get_number(s["constant_se"], "se_source.constant_se");
    if (s.contains("table")) c.se_source.table = get_string(s["table"], "se_source.table");
    if (s.contains("velocity_mps")) c.se_source.velocity_mps = get_range(s["velocity_mps"], "se_source.velocity_mps");
    if (s.contains("velocity_mode")) {
      const auto mode = get_string(s["velocity_mode"], "se_source.velocity_mode");
      if (mode == "instantaneous") c.se_source.velocity_mode = VelocityMode::Instantaneous;
      else if (mode == "smoothed") c.se_source.velocity_mode = VelocityMode::Smoothed;
      else if (mode == "predicted") c.se_source.velocity_mode = VelocityMode::Predicted;
      else throw ConfigError("se_source.velocity_mode: expected instantaneous, smoothed or predicted");
    }
  }
  if (c.se_source.table != "zak" && c.se_source.table != "sfft") {
    c.se_source.table = resolve_path(c.se_source.table, base_dir);
  }

  if (doc.contains("carrier_hz")) c.carrier_hz = get_number(doc["carrier_hz"], "carrier_hz");
  if (doc.contains("greedy_step")) c.greedy_step = get_number(doc["greedy_step"], "greedy_step");
  if (doc.contains("pool_threshold")) {
    c.pool_threshold = get_unsigned<std::uint32_t>(doc["pool_threshold"], "pool_threshold");
  }
  if (doc.contains("trip_file")) c.trip_file = resolve_path(get_string(doc["trip_file"], "trip_file"), base_dir);

  if (doc.contains("ved_columns")) {
    const auto& v = require_object(doc["ved_columns"], "ved_columns");
    reject_unknown(v, "ved_columns", {"trip", "timestamp", "latitude", "longitude"});
    if (v.contains("trip")) c.ved_columns.trip = get_string(v["trip"], "ved_columns.trip");
    if (v.contains("timestamp")) c.ved_columns.timestamp = get_string(v["timestamp"], "ved_columns.timestamp");
    if (v.contains("latitude")) c.ved_columns.latitude = get_string(v["latitude"], "ved_columns.latitude");
    if (v.contains("longitude")) c.ved_columns.longitude = get_string(v["longitude"], "ved_columns.longitude");
  }
  if (doc.contains("gap_bounds_ms")) {
    const auto& g = require_object(doc["gap_bounds_ms"], "gap_bounds_ms");
    reject_unknown(g, "gap_bounds_ms", {"min", "max"});
    if (g.contains("min")) c.gap_bounds.min_dt_ms = get_unsigned<std::int64_t>(g["min"], "gap_bounds_ms.min");
    if (g.contains("max")) c.gap_bounds.max_dt_ms = get_unsigned<std::int64_t>(g["max"], "gap_bounds_ms.max");
  }
  if (doc.contains("base_station")) {
    const auto& b = require_object(doc["base_station"], "base_station");
    reject_unknown(b, "base_station", {"lat_deg", "lon_deg", "radius_m"});
    if (b.contains("lat_deg")) c.base_station.lat_deg = get_number(b["lat_deg"], "base_station.lat_deg");
    if (b.contains("lon_deg")) c.base_station.lon_deg = get_number(b["lon_deg"], "base_station.lon_deg");
    if (b.contains("radius_m")) c.base_station.radius_m = get_number(b["radius_m"], "base_station.radius_m");
  }
  if (doc.contains("koopman")) {
    const auto& k = require_object(doc["koopman"], "koopman");
    reject_unknown(k, "koopman", {"embed_dim", "remove_mean", "train_fraction", "position"});
    if (k.contains("embed_dim")) c.koopman.embed_dim = get_unsigned<std::size_t>(k["embed_dim"], "koopman.embed_dim");
    if (k.contains("remove_mean")) c.koopman.remove_mean = get_bool(k["remove_mean"], "koopman.remove_mean");
    if (k.contains("train_fraction")) {
      c.koopman.train_fraction = get_number(k["train_fraction"], "koopman.train_fraction");
    }
    if (k.contains("position")) {
      const auto pos = get_string(k["position"], "koopman.position");
      if (pos != "phi" && pos != "latlon") throw ConfigError("koopman.position: expected phi or latlon");
      c.koopman.position_latlon = pos == "latlon";
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

void validate(const ScenarioConfig& c) {
  if (c.n_users == 0) throw ConfigError("n_users: must be positive");
  if (c.k_tasks == 0) throw ConfigError("k_tasks: must be positive");
  check_range(c.data_bits, "data_bits");
  check_range(c.cycles_per_bit, "cycles_per_bit");
  check_range(c.cpu_hz, "cpu_hz");
  check_range(c.energy_coeff, "energy_coeff");
  check_range(c.bandwidth_hz, "bandwidth_hz");
  check_range(c.noise_var, "noise_var");
  check_range(c.channel_gain, "channel_gain");
  if (c.channel_gain.max > 1.0) throw ConfigError("channel_gain: must be <= 1");
  check_range(c.se_source.velocity_mps, "se_source.velocity_mps", /*allow_zero=*/true);
  if (c.se_source.kind == SeSourceKind::Constant &&
      (!(c.se_source.constant_se > 0.0) || !std::isfinite(c.se_source.constant_se))) {
    throw ConfigError("se_source.constant_se: must be > 0");
  }
  if (c.se_source.kind == SeSourceKind::Trajectory && c.trip_file.empty()) {
    throw ConfigError("trip_file: required when se_source.kind is trajectory");
  }
  if (!(c.carrier_hz > 0.0)) throw ConfigError("carrier_hz: must be > 0");
  if (!(c.greedy_step > 0.0 && c.greedy_step <= 1.0)) throw ConfigError("greedy_step: must lie in (0, 1]");
  if (c.gap_bounds.min_dt_ms <= 0 || c.gap_bounds.min_dt_ms > c.gap_bounds.max_dt_ms) {
    throw ConfigError("gap_bounds_ms: need 0 < min <= max");
  }
  try {
    validate(c.base_station);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("base_station: ") + e.what());
  }
  if (c.koopman.embed_dim == 0) throw ConfigError("koopman.embed_dim: must be positive");
  if (!(c.koopman.train_fraction > 0.0 && c.koopman.train_fraction < 1.0)) {
    throw ConfigError("koopman.train_fraction: must lie in (0, 1)");
  }

  const bool random = randomized(c.data_bits) || randomized(c.cycles_per_bit) ||
                      randomized(c.cpu_hz) || randomized(c.energy_coeff) ||
                      randomized(c.bandwidth_hz) || randomized(c.noise_var) ||
                      randomized(c.channel_gain) ||
                      (c.se_source.kind == SeSourceKind::Table && randomized(c.se_source.velocity_mps));
  if (random && !c.rng_seed) throw ConfigError("rng_seed: required for randomized scenarios");
}

SeModel resolve_se_model(const ScenarioConfig& config) {
  const auto& name = config.se_source.table;
  if (name == "zak") return SeModel::builtin_zak();
  if (name == "sfft") return SeModel::builtin_sfft();
  auto loaded = load_se_table(name);
  return SeModel::from_table(loaded.table(), SeMode::CustomTable, config.carrier_hz);
}

double trip_velocity(const Trip& trip, VelocityMode mode, const GapBounds& bounds,
                     const KoopmanConfig& koopman) {
  const auto segments = split_at_gaps(trip.samples, bounds);
  const auto longest = std::max_element(segments.begin(), segments.end(),
                                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
  if (longest == segments.end() || longest->size() < 2) {
    throw ConfigError("trip '" + trip.id + "' has no gap-free sample pair");
  }
  std::vector<double> v;
  for (const auto& p : estimate_velocity(*longest, bounds)) v.push_back(p.velocity_mps);

  switch (mode) {
    case VelocityMode::Instantaneous:
      return v.back();
    case VelocityMode::Smoothed: {
      double sum = 0.0;
      for (double x : v) sum += x;
      return sum / static_cast<double>(v.size());
    }
    case VelocityMode::Predicted: {
      DmdOptions opts;
      opts.embed_dim = koopman.embed_dim;
      opts.remove_mean = koopman.remove_mean;
      opts.state_label = "velocity";
      try {
        const auto model = dmd_fit(v, opts);
        const std::span<const double> recent(v.data() + v.size() - opts.embed_dim, opts.embed_dim);
        return std::max(0.0, dmd_predict(model, recent, 1).front());
      } catch (const InsufficientDataError& e) {
        throw ConfigError("trip '" + trip.id + "' too short for predicted velocity: " + e.what());
      }
    }
  }
  return v.back();
}

Scenario build_scenario(const ScenarioConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.rng_seed.value_or(0));

  std::optional<SeModel> table;
  if (config.se_source.kind != SeSourceKind::Constant) table = resolve_se_model(config);
  std::vector<Trip> trips;
  if (config.se_source.kind == SeSourceKind::Trajectory) {
    trips = parse_ved_csv(config.trip_file, config.ved_columns).trips;
    if (trips.empty()) throw ConfigError("trip_file: no trips in '" + config.trip_file.string() + "'");
  }

  const std::uint32_t accepted =
      config.pool_threshold == 0 ? config.n_users : std::min(config.pool_threshold, config.n_users);

  Scenario scenario;
  for (std::uint32_t n = 0; n < config.n_users; ++n) {
    DeviceEntry entry;
    entry.device.cpu_hz = draw(rng, config.cpu_hz);
    entry.device.energy_coeff = draw(rng, config.energy_coeff);
    entry.device.bandwidth_hz = draw(rng, config.bandwidth_hz);
    entry.device.noise_var = draw(rng, config.noise_var);
    entry.device.channel_gain = draw(rng, config.channel_gain);
    double velocity = draw(rng, config.se_source.velocity_mps);
    for (std::uint32_t k = 0; k < config.k_tasks; ++k) {
      TaskSpec task;
      task.data_bits = draw(rng, config.data_bits);
      task.cycles_per_bit = draw(rng, config.cycles_per_bit);
      entry.tasks.push_back(task);
    }

    switch (config.se_source.kind) {
      case SeSourceKind::Constant:
        velocity = std::nan("");
        entry.se = config.se_source.constant_se;
        break;
      case SeSourceKind::Table:
        entry.se = calc_se(*table, velocity);
        break;
      case SeSourceKind::Trajectory:
        velocity = trip_velocity(trips[n % trips.size()], config.se_source.velocity_mode,
                                 config.gap_bounds, config.koopman);
        entry.se = calc_se(*table, velocity);
        break;
    }
    if (!(entry.se > 0.0)) {
      throw ConfigError("se_source: device " + std::to_string(n) + " gets se <= 0");
    }
    // Requests past the threshold are drawn (keeping the stream stable) but not admitted.
    if (n < accepted) {
      scenario.pool.devices.emplace(n, std::move(entry));
      scenario.velocity_mps.push_back(velocity);
    }
  }
  return scenario;
}

SweepAxis parse_axis(std::string_view text) {
  if (text == "velocity") return SweepAxis::Velocity;
  if (text == "bandwidth") return SweepAxis::Bandwidth;
  if (text == "datasize") return SweepAxis::DataSize;
  throw ConfigError("axis: expected velocity, bandwidth or datasize, got '" + std::string(text) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Velocity: return "velocity";
    case SweepAxis::Bandwidth: return "bandwidth";
    case SweepAxis::DataSize: return "datasize";
  }
  return "unknown";
}

TaskPool apply_axis(const TaskPool& base, SweepAxis axis, double value, const SeModel& model) {
  if (axis == SweepAxis::Velocity) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ConfigError("grid: velocity must be non-negative, got " + std::to_string(value));
    }
  } else if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("grid: values must be positive, got " + std::to_string(value));
  }
  TaskPool pool = base;
  for (auto& [id, entry] : pool.devices) {
    switch (axis) {
      case SweepAxis::Velocity:
        entry.se = calc_se(model, value);
        break;
      case SweepAxis::Bandwidth:
        entry.device.bandwidth_hz = value;
        break;
      case SweepAxis::DataSize:
        for (auto& task : entry.tasks) task.data_bits *= value;
        break;
    }
  }
  return pool;
}

}  // namespace mecoff
