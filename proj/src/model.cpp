#include "mecoff/model.hpp"

#include <cmath>
#include <string>

#include "mecoff/errors.hpp"

namespace mecoff {
namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw DomainError("offloading ratio must lie in [0, 1], got " + std::to_string(ratio));
  }
}

void check_se(double se) {
  if (!(se >= 0.0) || !std::isfinite(se)) {
    throw DomainError("spectral efficiency must be finite and >= 0, got " + std::to_string(se));
  }
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

void validate(const TaskSpec& task) {
  require_positive(task.data_bits, "data_bits");
  require_positive(task.cycles_per_bit, "cycles_per_bit");
}

void validate(const DeviceSpec& device) {
  require_positive(device.cpu_hz, "cpu_hz");
  require_positive(device.energy_coeff, "energy_coeff");
  require_positive(device.bandwidth_hz, "bandwidth_hz");
  require_positive(device.channel_gain, "channel_gain");
  require_positive(device.noise_var, "noise_var");
  if (device.channel_gain > 1.0) throw DomainError("channel_gain must be <= 1");
}

double local_time(const TaskSpec& task, const DeviceSpec& device, double ratio) {
  check_ratio(ratio);
  return task.cycles_per_bit * (1.0 - ratio) * task.data_bits / device.cpu_hz;
}

double local_energy(const TaskSpec& task, const DeviceSpec& device, double ratio) {
  check_ratio(ratio);
  return device.energy_coeff * task.cycles_per_bit * device.cpu_hz * device.cpu_hz *
         (1.0 - ratio) * task.data_bits;
}

double tx_power(double se, const DeviceSpec& device) {
  check_se(se);
  return (std::exp2(se) - 1.0) * device.noise_var / device.channel_gain;
}

double uplink_rate(const DeviceSpec& device, double se) {
  check_se(se);
  return device.bandwidth_hz * se;
}

double offload_time(const TaskSpec& task, const DeviceSpec& device, double se, double ratio) {
  check_ratio(ratio);
  check_se(se);
  if (ratio == 0.0) return 0.0;
  if (se == 0.0) throw InfeasibleLinkError("cannot offload a nonzero share at zero spectral efficiency");
  return ratio * task.data_bits / uplink_rate(device, se);
}

double offload_energy(const TaskSpec& task, const DeviceSpec& device, double se, double ratio) {
  const double t = offload_time(task, device, se, ratio);
  if (t == 0.0) return 0.0;
  return tx_power(se, device) * t;
}

double total_time(const TaskSpec& task, const DeviceSpec& device, double se, double ratio) {
  return local_time(task, device, ratio) + offload_time(task, device, se, ratio);
}

EnergyBreakdown total_energy(const TaskSpec& task, const DeviceSpec& device, double se,
                             double ratio) {
  EnergyBreakdown out;
  out.t_local = local_time(task, device, ratio);
  out.t_off = offload_time(task, device, se, ratio);
  out.t_total = out.t_local + out.t_off;
  out.e_local = local_energy(task, device, ratio);
  out.e_off = out.t_off == 0.0 ? 0.0 : tx_power(se, device) * out.t_off;
  out.e_total = out.e_off + out.e_local;
  return out;
}

AffineEnergy affine_coefficients(const TaskSpec& task, const DeviceSpec& device, double se) {
  check_se(se);
  if (se == 0.0) throw InfeasibleLinkError("affine decomposition needs se > 0");
  return {offload_energy(task, device, se, 1.0), local_energy(task, device, 0.0)};
}

}  // namespace mecoff
