#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mecoff/results.hpp"
#include "mecoff/scenario.hpp"

namespace mecoff {

/// Greedy trace of the configured scenario. Columns: iteration, chosen_task,
/// total_energy_J. Row 0 is the 0.5 initialization (chosen_task "init"),
/// then one row per accepted step.
Table run_convergence(const ScenarioConfig& config);

struct SweepGrid {
  SweepAxis axis = SweepAxis::Bandwidth;
  std::vector<double> values;
};

/// Optimizes one seeded instance per grid point; only the swept axis varies.
/// Columns: axis_value, [axis2_value,] init_energy_J, final_energy_J,
/// saving_fraction. Rows follow grid order (first axis outermost). Grid points
/// run in parallel.
Table run_sweep(const ScenarioConfig& config, const SweepGrid& grid,
                const std::optional<SweepGrid>& second = std::nullopt);

/// Per-trip geometry, velocity statistics and Koopman one-step RMSE on the
/// longest gap-free segment (chronological train/test split). See README for
/// the column list.
Table run_trajectory_eval(std::span<const Trip> trips, const BaseStationGeom& bs,
                          const KoopmanConfig& koopman, const GapBounds& bounds = {});

struct KoopmanScore {
  double train_rmse = 0.0;
  double test_rmse = 0.0;
  std::size_t train_points = 0;
  std::size_t test_points = 0;
};

/// Fits on the first train_fraction of `series` and scores one-step-ahead
/// predictions from true history. Empty when the split is too short to fit.
std::optional<KoopmanScore> koopman_score(std::span<const double> series,
                                          const KoopmanConfig& koopman);

/// Continuous version of a wrapped angle series.
std::vector<double> unwrap_angles(std::span<const double> phi);

}  // namespace mecoff
