#include "mecoff/optimizer.hpp"

#include <algorithm>
#include <functional>

#include "mecoff/errors.hpp"

namespace mecoff {
namespace {

constexpr double kSaturationEps = 1e-9;

double raised_ratio(double ratio, double step) {
  const double r = std::min(1.0, ratio + step);
  return 1.0 - r <= kSaturationEps ? 1.0 : r;
}

double sum_energy(const std::vector<PlannedTask>& tasks) {
  double total = 0.0;
  for (const auto& t : tasks) total += t.energy.e_total;
  return total;
}

// Flat view of the pool in plan order.
struct FlatTask {
  const DeviceEntry* entry;
  const TaskSpec* task;
};

std::vector<FlatTask> flatten(const TaskPool& pool) {
  std::vector<FlatTask> out;
  out.reserve(pool.task_count());
  for (const auto& [id, entry] : pool.devices) {
    for (const auto& task : entry.tasks) out.push_back({&entry, &task});
  }
  return out;
}

OffloadPlan plan_from(const TaskPool& pool, const std::function<double(const FlatTask&)>& ratio_of) {
  validate(pool);
  OffloadPlan plan;
  plan.tasks.reserve(pool.task_count());
  for (const auto& [id, entry] : pool.devices) {
    for (std::size_t k = 0; k < entry.tasks.size(); ++k) {
      const double ratio = ratio_of({&entry, &entry.tasks[k]});
      plan.tasks.push_back(
          {{id, k}, ratio, total_energy(entry.tasks[k], entry.device, entry.se, ratio)});
    }
  }
  plan.total_energy = sum_energy(plan.tasks);
  return plan;
}

std::optional<std::size_t> worst_index(const std::vector<FlatTask>& flat, const OffloadPlan& plan,
                                       double step) {
  std::optional<std::size_t> best;
  double best_drop = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto& planned = plan.tasks[i];
    if (planned.ratio >= 1.0) continue;
    const double next = raised_ratio(planned.ratio, step);
    const double drop =
        planned.energy.e_total -
        total_energy(*flat[i].task, flat[i].entry->device, flat[i].entry->se, next).e_total;
    if (drop > best_drop) {
      best_drop = drop;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::size_t TaskPool::task_count() const {
  std::size_t n = 0;
  for (const auto& [id, entry] : devices) n += entry.tasks.size();
  return n;
}

void validate(const TaskPool& pool) {
  if (pool.devices.empty()) throw DomainError("task pool is empty");
  for (const auto& [id, entry] : pool.devices) {
    if (entry.tasks.empty()) throw DomainError("device " + std::to_string(id) + " has no tasks");
    if (!(entry.se > 0.0)) throw DomainError("device " + std::to_string(id) + " has se <= 0");
    validate(entry.device);
    for (const auto& task : entry.tasks) validate(task);
  }
}

std::string to_string(const TaskRef& ref) {
  return std::to_string(ref.device) + ":" + std::to_string(ref.index);
}

std::string_view to_string(Termination reason) {
  return reason == Termination::AllSaturated ? "all-saturated" : "no-improvement";
}

const PlannedTask& OffloadPlan::at(const TaskRef& ref) const {
  const auto it = std::lower_bound(tasks.begin(), tasks.end(), ref,
                                   [](const PlannedTask& t, const TaskRef& r) { return t.ref < r; });
  if (it == tasks.end() || it->ref != ref) throw std::out_of_range("no task " + to_string(ref));
  return *it;
}

OffloadPlan uniform_plan(const TaskPool& pool, double ratio) {
  return plan_from(pool, [ratio](const FlatTask&) { return ratio; });
}

OffloadPlan init_plan(const TaskPool& pool) { return uniform_plan(pool, 0.5); }

std::optional<TaskRef> find_worst(const TaskPool& pool, const OffloadPlan& plan, double step) {
  if (!(step > 0.0)) throw DomainError("greedy step must be > 0");
  const auto flat = flatten(pool);
  if (flat.size() != plan.tasks.size()) throw ShapeError("plan does not match pool");
  const auto idx = worst_index(flat, plan, step);
  if (!idx) return std::nullopt;
  return plan.tasks[*idx].ref;
}

GreedyResult greedy_optimize(const TaskPool& pool, double step) {
  if (!(step > 0.0)) throw DomainError("greedy step must be > 0");
  GreedyResult result{init_plan(pool), {}};
  auto& plan = result.plan;
  auto& trace = result.trace;
  trace.initial_energy = plan.total_energy;
  const auto flat = flatten(pool);

  double current = plan.total_energy;
  for (std::size_t iteration = 1;; ++iteration) {
    const auto idx = worst_index(flat, plan, step);
    if (!idx) {
      const bool saturated = std::all_of(plan.tasks.begin(), plan.tasks.end(),
                                         [](const PlannedTask& t) { return t.ratio >= 1.0; });
      trace.reason = saturated ? Termination::AllSaturated : Termination::NoImprovement;
      break;
    }

    auto& chosen = plan.tasks[*idx];
    const PlannedTask before = chosen;
    chosen.ratio = raised_ratio(chosen.ratio, step);
    chosen.energy =
        total_energy(*flat[*idx].task, flat[*idx].entry->device, flat[*idx].entry->se, chosen.ratio);
    const double probed = sum_energy(plan.tasks);
    if (probed >= current) {
      chosen = before;
      ++trace.rejected_probes;
      trace.reason = Termination::NoImprovement;
      break;
    }
    current = probed;
    trace.steps.push_back({iteration, chosen.ref, chosen.ratio, current});
  }
  plan.total_energy = current;
  return result;
}

OffloadPlan restricted_oracle(const TaskPool& pool) {
  return plan_from(pool, [](const FlatTask& t) {
    const auto c = affine_coefficients(*t.task, t.entry->device, t.entry->se);
    return c.full_offload < c.full_local ? 1.0 : 0.5;
  });
}

OffloadPlan global_oracle(const TaskPool& pool) {
  return plan_from(pool, [](const FlatTask& t) {
    const auto c = affine_coefficients(*t.task, t.entry->device, t.entry->se);
    if (c.full_offload < c.full_local) return 1.0;
    if (c.full_offload > c.full_local) return 0.0;
    return 0.5;
  });
}

}  // namespace mecoff
