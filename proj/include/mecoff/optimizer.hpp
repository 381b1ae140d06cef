#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mecoff/model.hpp"

namespace mecoff {

using DeviceId = std::uint32_t;

struct DeviceEntry {
  DeviceSpec device;
  double se = 0.0;  // spectral efficiency of the device's uplink, bits/s/Hz
  std::vector<TaskSpec> tasks;
};

/// Offloading requests keyed by mobile device. Ordered so iteration and
/// tie-breaks are deterministic.
struct TaskPool {
  std::map<DeviceId, DeviceEntry> devices;

  std::size_t task_count() const;
};

/// Throws DomainError for an empty pool, a device without tasks, se <= 0 or
/// invalid specs.
void validate(const TaskPool& pool);

struct TaskRef {
  DeviceId device = 0;
  std::size_t index = 0;

  auto operator<=>(const TaskRef&) const = default;
};

std::string to_string(const TaskRef& ref);

struct PlannedTask {
  TaskRef ref;
  double ratio = 0.0;
  EnergyBreakdown energy;
};

/// Ratios and energies for every task of a pool, in pool order
/// (device id ascending, then task index).
struct OffloadPlan {
  std::vector<PlannedTask> tasks;
  double total_energy = 0.0;

  const PlannedTask& at(const TaskRef& ref) const;
};

/// Plan with the given ratio for every task, energies from the model.
OffloadPlan uniform_plan(const TaskPool& pool, double ratio);
OffloadPlan init_plan(const TaskPool& pool);

inline constexpr double kDefaultGreedyStep = 0.1;

/// Unsaturated task whose energy drops the most when its ratio rises by
/// min(step, 1 - ratio). Ties go to the smallest (device, index). Empty when
/// no task strictly decreases its energy.
std::optional<TaskRef> find_worst(const TaskPool& pool, const OffloadPlan& plan,
                                  double step = kDefaultGreedyStep);

enum class Termination { NoImprovement, AllSaturated };

std::string_view to_string(Termination reason);

struct GreedyStep {
  std::size_t iteration = 0;  // 1-based
  TaskRef task;
  double ratio = 0.0;         // ratio of `task` after the step
  double total_energy = 0.0;  // pool energy after the step
};

struct GreedyTrace {
  double initial_energy = 0.0;
  std::vector<GreedyStep> steps;  // accepted steps only
  std::size_t rejected_probes = 0;
  Termination reason = Termination::NoImprovement;
};

struct GreedyResult {
  OffloadPlan plan;
  GreedyTrace trace;
};

/// Iterative greedy decision: start every ratio at 0.5, repeatedly raise the
/// worst task's ratio by `step` and keep the step only if pool energy strictly
/// drops. Ratios are capped at 1.
GreedyResult greedy_optimize(const TaskPool& pool, double step = kDefaultGreedyStep);

/// Exact optimum over ratios in [0.5, 1] (the region greedy can reach).
OffloadPlan restricted_oracle(const TaskPool& pool);
/// Exact optimum over [0, 1]: each task sits at the cheaper corner.
OffloadPlan global_oracle(const TaskPool& pool);

}  // namespace mecoff
