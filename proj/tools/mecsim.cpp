// mecsim: offloading experiments from the command line.
//
//   mecsim convergence [--config f] [--seed n] [--se-table f] [--out f] [--format csv|json]
//   mecsim sweep --axis velocity|bandwidth|datasize --grid v1,v2,... [--axis2 .. --grid2 ..]
//   mecsim trajectory [--trips f] [--bs-lat x --bs-lon y --bs-radius r]
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mecoff/errors.hpp"
#include "mecoff/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  std::string se_table;
};

void add_common(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config, "Scenario JSON file (built-in defaults when omitted)");
  cmd.add_option("--seed", flags.seed, "RNG seed, overrides the config");
  cmd.add_option("--out", flags.out, "Output file (stdout when omitted)");
  cmd.add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--se-table", flags.se_table, "SE-vs-velocity CSV, overrides se_source.table");
}

mecoff::ScenarioConfig resolve_config(const CommonFlags& flags) {
  mecoff::ScenarioConfig config;
  if (!flags.config.empty()) config = mecoff::load_config(flags.config);
  if (flags.seed) config.rng_seed = *flags.seed;
  if (!flags.se_table.empty()) {
    config.se_source.table = flags.se_table;
    if (config.se_source.kind == mecoff::SeSourceKind::Constant) {
      config.se_source.kind = mecoff::SeSourceKind::Table;
    }
  }
  mecoff::validate(config);
  return config;
}

void write(const mecoff::Table& table, const CommonFlags& flags) {
  const auto format = mecoff::parse_format(flags.format);
  if (flags.out.empty()) {
    std::cout << mecoff::render(table, format);
    std::cout.flush();
    if (!std::cout) throw mecoff::IoError("write to stdout failed");
  } else {
    mecoff::emit_results(table, flags.out, format);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-offloading energy simulator"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* convergence = app.add_subcommand("convergence", "Greedy energy trace of one seeded instance");
  add_common(*convergence, flags);

  auto* sweep = app.add_subcommand("sweep", "Optimized energy along a parameter grid");
  add_common(*sweep, flags);
  std::string axis, axis2;
  std::vector<double> grid, grid2;
  sweep->add_option("--axis", axis, "velocity | bandwidth | datasize")->required();
  sweep->add_option("--grid", grid, "Comma-separated grid values")->required()->delimiter(',');
  sweep->add_option("--axis2", axis2, "Optional second axis (2-D grid)");
  sweep->add_option("--grid2", grid2, "Values of the second axis")->delimiter(',');

  auto* trajectory = app.add_subcommand("trajectory", "Trip geometry, velocity and Koopman report");
  add_common(*trajectory, flags);
  std::string trips;
  std::optional<double> bs_lat, bs_lon, bs_radius;
  trajectory->add_option("--trips", trips, "VED-style trip CSV (overrides trip_file)");
  trajectory->add_option("--bs-lat", bs_lat, "Base station latitude, degrees");
  trajectory->add_option("--bs-lon", bs_lon, "Base station longitude, degrees");
  trajectory->add_option("--bs-radius", bs_radius, "Cell radius, meters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto config = resolve_config(flags);
    if (convergence->parsed()) {
      write(mecoff::run_convergence(config), flags);
    } else if (sweep->parsed()) {
      mecoff::SweepGrid first{mecoff::parse_axis(axis), grid};
      std::optional<mecoff::SweepGrid> second;
      if (!axis2.empty() || !grid2.empty()) {
        if (axis2.empty() || grid2.empty()) throw mecoff::ConfigError("axis2/grid2: give both or neither");
        second = mecoff::SweepGrid{mecoff::parse_axis(axis2), grid2};
      }
      write(mecoff::run_sweep(config, first, second), flags);
    } else {
      if (!trips.empty()) config.trip_file = trips;
      if (bs_lat) config.base_station.lat_deg = *bs_lat;
      if (bs_lon) config.base_station.lon_deg = *bs_lon;
      if (bs_radius) config.base_station.radius_m = *bs_radius;
      mecoff::validate(config);
      if (config.trip_file.empty()) throw mecoff::ConfigError("trip_file: give --trips or set it in the config");
      const auto parsed = mecoff::parse_ved_csv(config.trip_file, config.ved_columns);
      for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
      write(mecoff::run_trajectory_eval(parsed.trips, config.base_station, config.koopman, config.gap_bounds),
            flags);
    }
  } catch (const mecoff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mecoff::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mecoff::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const mecoff::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitIo;
  } catch (const mecoff::SchemaError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
