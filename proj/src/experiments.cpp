#include "mecoff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "mecoff/errors.hpp"
#include "mecoff/koopman.hpp"

namespace mecoff {
namespace {

struct SweepPoint {
  double init_energy = 0.0;
  double final_energy = 0.0;
};

// Runs fn(i) for i in [0, n) on a few worker threads; results land by index.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  threads.clear();
  if (error) std::rethrow_exception(error);
}

double saving(double init, double final_energy) {
  return init > 0.0 ? (init - final_energy) / init : 0.0;
}

}  // namespace

Table run_convergence(const ScenarioConfig& config) {
  const auto scenario = build_scenario(config);
  const auto result = greedy_optimize(scenario.pool, config.greedy_step);

  Table table{"convergence", {"iteration", "chosen_task", "total_energy_J"}, {}};
  table.add_row({std::int64_t{0}, std::string("init"), result.trace.initial_energy});
  for (const auto& step : result.trace.steps) {
    table.add_row({static_cast<std::int64_t>(step.iteration), to_string(step.task), step.total_energy});
  }
  return table;
}

Table run_sweep(const ScenarioConfig& config, const SweepGrid& grid,
                const std::optional<SweepGrid>& second) {
  if (grid.values.empty() || (second && second->values.empty())) throw ConfigError("grid: must not be empty");
  if (second && second->axis == grid.axis) throw ConfigError("axis2: must differ from axis");
  const auto scenario = build_scenario(config);
  const SeModel model = config.se_source.kind == SeSourceKind::Constant
                            ? SeModel::builtin_zak()
                            : resolve_se_model(config);

  const std::size_t inner = second ? second->values.size() : 1;
  const std::size_t total = grid.values.size() * inner;
  std::vector<SweepPoint> points(total);
  parallel_for(total, [&](std::size_t i) {
    TaskPool pool = apply_axis(scenario.pool, grid.axis, grid.values[i / inner], model);
    if (second) pool = apply_axis(pool, second->axis, second->values[i % inner], model);
    const auto result = greedy_optimize(pool, config.greedy_step);
    points[i] = {result.trace.initial_energy, result.plan.total_energy};
  });

  Table table;
  table.name = "sweep:" + std::string(to_string(grid.axis)) +
               (second ? "x" + std::string(to_string(second->axis)) : "");
  table.columns = {"axis_value"};
  if (second) table.columns.emplace_back("axis2_value");
  for (const char* c : {"init_energy_J", "final_energy_J", "saving_fraction"}) table.columns.emplace_back(c);

  for (std::size_t i = 0; i < total; ++i) {
    std::vector<Cell> row{grid.values[i / inner]};
    if (second) row.emplace_back(second->values[i % inner]);
    row.emplace_back(points[i].init_energy);
    row.emplace_back(points[i].final_energy);
    row.emplace_back(saving(points[i].init_energy, points[i].final_energy));
    table.add_row(std::move(row));
  }
  return table;
}

std::vector<double> unwrap_angles(std::span<const double> phi) {
  std::vector<double> out(phi.begin(), phi.end());
  double shift = 0.0;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    const double d = phi[i] - phi[i - 1];
    if (d > std::numbers::pi) shift -= 2.0 * std::numbers::pi;
    else if (d < -std::numbers::pi) shift += 2.0 * std::numbers::pi;
    out[i] = phi[i] + shift;
  }
  return out;
}

std::optional<KoopmanScore> koopman_score(std::span<const double> series,
                                          const KoopmanConfig& koopman) {
  const std::size_t q = koopman.embed_dim;
  const auto n_train = static_cast<std::size_t>(std::floor(koopman.train_fraction * static_cast<double>(series.size())));
  if (n_train < q + 2 || n_train >= series.size()) return std::nullopt;

  DmdOptions opts;
  opts.embed_dim = q;
  opts.remove_mean = koopman.remove_mean;
  const auto train = series.first(n_train);
  const auto model = dmd_fit(train, opts);

  KoopmanScore score;
  const auto train_pred = one_step_predictions(model, train);
  score.train_points = train_pred.size();
  score.train_rmse = prediction_rmse(train_pred, train.subspan(q));

  // Test predictions use true history, which reaches back into the train part.
  const auto all_pred = one_step_predictions(model, series);
  const std::span<const double> test_pred(all_pred.data() + (n_train - q), series.size() - n_train);
  score.test_points = test_pred.size();
  score.test_rmse = prediction_rmse(test_pred, series.subspan(n_train));
  return score;
}

Table run_trajectory_eval(std::span<const Trip> trips, const BaseStationGeom& bs,
                          const KoopmanConfig& koopman, const GapBounds& bounds) {
  validate(bs);
  Table table;
  table.name = "trajectory";
  table.columns = {"trip",
                   "samples",
                   "segments",
                   "velocity_pairs",
                   "gap_pairs",
                   "max_step_m",
                   "mean_velocity_mps",
                   "min_velocity_mps",
                   "max_velocity_mps",
                   "max_d_over_R",
                   "max_step_over_R",
                   "koopman_segment_samples",
                   "velocity_train_rmse",
                   "velocity_test_rmse",
                   "position_series",
                   "position_train_rmse",
                   "position_test_rmse",
                   "koopman_status"};

  const auto null_or = [](const std::optional<double>& v) -> Cell {
    return v ? Cell{*v} : Cell{std::monostate{}};
  };

  for (const auto& trip : trips) {
    std::vector<VelocityPoint> velocities;
    if (trip.samples.size() >= 2) velocities = estimate_velocity(trip.samples, bounds);
    const auto stats = velocity_stats(velocities);
    const auto segments = split_at_gaps(trip.samples, bounds);

    double max_d_over_r = 0.0;
    for (const auto& s : trip.samples) {
      max_d_over_r = std::max(max_d_over_r, haversine_m(s.position(), bs.position()) / bs.radius_m);
    }

    const auto longest = std::max_element(segments.begin(), segments.end(),
                                          [](const auto& a, const auto& b) { return a.size() < b.size(); });
    const std::vector<TrajectorySample> empty;
    const auto& seg = longest == segments.end() ? empty : *longest;

    std::optional<double> v_train, v_test, p_train, p_test;
    std::string status = "ok";
    if (seg.size() >= 2) {
      std::vector<double> speed;
      for (const auto& p : estimate_velocity(seg, bounds)) speed.push_back(p.velocity_mps);
      if (const auto score = koopman_score(speed, koopman)) {
        v_train = score->train_rmse;
        v_test = score->test_rmse;
      }

      if (koopman.position_latlon) {
        std::vector<double> lat, lon;
        for (const auto& s : seg) {
          lat.push_back(s.lat_deg);
          lon.push_back(s.lon_deg);
        }
        const auto a = koopman_score(lat, koopman);
        const auto b = koopman_score(lon, koopman);
        if (a && b) {
          p_train = std::sqrt((a->train_rmse * a->train_rmse + b->train_rmse * b->train_rmse) / 2.0);
          p_test = std::sqrt((a->test_rmse * a->test_rmse + b->test_rmse * b->test_rmse) / 2.0);
        }
      } else {
        std::vector<double> phi;
        bool coincident = false;
        for (const auto& s : seg) {
          try {
            phi.push_back(angular_position(s, bs).phi_rad);
          } catch (const DomainError&) {
            coincident = true;
            break;
          }
        }
        if (coincident) {
          status = "position skipped: sample on base station";
        } else if (const auto score = koopman_score(unwrap_angles(phi), koopman)) {
          p_train = score->train_rmse;
          p_test = score->test_rmse;
        }
      }
    }
    if (!v_train && !p_train && status == "ok") {
      status = "skipped: segment too short for embed_dim " + std::to_string(koopman.embed_dim);
    }

    const auto opt_stat = [&](double v) -> Cell { return stats.count > 0 ? Cell{v} : Cell{std::monostate{}}; };
    table.add_row({trip.id,
                   static_cast<std::int64_t>(trip.samples.size()),
                   static_cast<std::int64_t>(segments.size()),
                   static_cast<std::int64_t>(stats.count),
                   static_cast<std::int64_t>(stats.gaps),
                   opt_stat(stats.max_distance_m),
                   opt_stat(stats.mean_mps),
                   opt_stat(stats.min_mps),
                   opt_stat(stats.max_mps),
                   max_d_over_r,
                   opt_stat(stats.max_distance_m / bs.radius_m),
                   static_cast<std::int64_t>(seg.size()),
                   null_or(v_train),
                   null_or(v_test),
                   std::string(koopman.position_latlon ? "latlon" : "phi"),
                   null_or(p_train),
                   null_or(p_test),
                   status});
  }
  return table;
}

}  // namespace mecoff
