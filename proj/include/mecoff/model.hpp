#pragma once

// Time and energy model of partial offloading: a task of D bits is split into
// a share l sent over the uplink and a share (1 - l) executed on the device.
// The edge server side costs nothing.

namespace mecoff {

struct TaskSpec {
  double data_bits = 0.0;       // D, bits
  double cycles_per_bit = 0.0;  // c, CPU cycles per bit
};

struct DeviceSpec {
  double cpu_hz = 0.0;        // f, Hz
  double energy_coeff = 0.0;  // epsilon, J s^2 / cycle (chip architecture)
  double bandwidth_hz = 0.0;  // W, Hz
  double channel_gain = 1.0;  // h in (0, 1]
  double noise_var = 0.0;     // sigma^2, W
};

struct EnergyBreakdown {
  double t_local = 0.0;
  double t_off = 0.0;
  double t_total = 0.0;
  double e_local = 0.0;
  double e_off = 0.0;
  double e_total = 0.0;
};

/// Energy as an affine function of the offloading ratio:
/// E(l) = full_offload * l + full_local * (1 - l).
struct AffineEnergy {
  double full_offload = 0.0;  // A
  double full_local = 0.0;    // B

  double at(double ratio) const { return full_offload * ratio + full_local * (1.0 - ratio); }
};

// Throw DomainError when a field is out of range.
void validate(const TaskSpec& task);
void validate(const DeviceSpec& device);

double local_time(const TaskSpec& task, const DeviceSpec& device, double ratio);
double local_energy(const TaskSpec& task, const DeviceSpec& device, double ratio);

/// Transmit power needed to sustain spectral efficiency `se` on this device's
/// channel: (2^se - 1) * sigma^2 / h.
double tx_power(double se, const DeviceSpec& device);

double uplink_rate(const DeviceSpec& device, double se);

/// l * D / (W * se). Zero when ratio is zero, whatever se is.
double offload_time(const TaskSpec& task, const DeviceSpec& device, double se, double ratio);
double offload_energy(const TaskSpec& task, const DeviceSpec& device, double se, double ratio);

/// Local and uplink time added sequentially.
double total_time(const TaskSpec& task, const DeviceSpec& device, double se, double ratio);
EnergyBreakdown total_energy(const TaskSpec& task, const DeviceSpec& device, double se,
                             double ratio);

/// Requires se > 0.
AffineEnergy affine_coefficients(const TaskSpec& task, const DeviceSpec& device, double se);

}  // namespace mecoff
