#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mecoff/errors.hpp"
#include "mecoff/model.hpp"

using namespace mecoff;

namespace {

// D = 1e6 bits, c = 1000 cycles/bit, f = 1 GHz, eps = 1e-27, W = 1 MHz,
// sigma^2 = 1 nW, h = 1.
TaskSpec reference_task() { return {1e6, 1000.0}; }
DeviceSpec reference_device() { return {1e9, 1e-27, 1e6, 1.0, 1e-9}; }

void expect_rel(double actual, double expected, double tol = 1e-12) {
  EXPECT_NEAR(actual, expected, tol * std::abs(expected)) << "expected " << expected;
}

// Independent random parameters for property checks.
struct RandomInstance {
  TaskSpec task;
  DeviceSpec device;
  double se;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  return {{u(1e4, 1e8), u(100, 5000)}, {u(1e8, 3e9), u(1e-28, 1e-26), u(1e5, 5e7), u(0.1, 1.0), u(1e-12, 1e-6)},
          u(0.05, 10.0)};
}

}  // namespace

TEST(LocalModel, TimeExamples) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_EQ(local_time(task, dev, 1.0), 0.0);
  expect_rel(local_time(task, dev, 0.0), 1.0);
  expect_rel(local_time(task, dev, 0.5), 0.5);
}

TEST(LocalModel, EnergyExamples) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_EQ(local_energy(task, dev, 1.0), 0.0);
  expect_rel(local_energy(task, dev, 0.0), 1.0);
  expect_rel(local_energy(task, dev, 0.5), 0.5);
}

TEST(LocalModel, RatioOutsideUnitIntervalIsDomainError) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_THROW(local_time(task, dev, -0.1), DomainError);
  EXPECT_THROW(local_energy(task, dev, 1.0001), DomainError);
  EXPECT_THROW(local_energy(task, dev, std::nan("")), DomainError);
}

TEST(TxPower, Examples) {
  auto dev = reference_device();
  EXPECT_EQ(tx_power(0.0, dev), 0.0);
  expect_rel(tx_power(1.0, dev), 1e-9);
  dev.channel_gain = 0.5;
  expect_rel(tx_power(4.0, dev), 3.0e-8);
  EXPECT_THROW(tx_power(-1.0, dev), DomainError);
}

TEST(UplinkRate, Examples) {
  auto dev = reference_device();
  EXPECT_EQ(uplink_rate(dev, 0.0), 0.0);
  expect_rel(uplink_rate(dev, 4.0), 4e6);
  dev.bandwidth_hz = 2e7;
  expect_rel(uplink_rate(dev, 2.5), 5e7);
}

TEST(Offload, TimeExamples) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_EQ(offload_time(task, dev, 4.0, 0.0), 0.0);
  expect_rel(offload_time(task, dev, 4.0, 1.0), 0.25);
  expect_rel(offload_time(task, dev, 4.0, 0.5), 0.125);
}

TEST(Offload, EnergyExamples) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_EQ(offload_energy(task, dev, 4.0, 0.0), 0.0);
  expect_rel(offload_energy(task, dev, 1.0, 1.0), 1e-9);
  expect_rel(offload_energy(task, dev, 4.0, 1.0), 3.75e-9);
}

TEST(Offload, ZeroSeIsInfeasibleUnlessNothingIsSent) {
  const auto task = reference_task();
  const auto dev = reference_device();
  EXPECT_EQ(offload_time(task, dev, 0.0, 0.0), 0.0);
  EXPECT_EQ(offload_energy(task, dev, 0.0, 0.0), 0.0);
  EXPECT_THROW(offload_time(task, dev, 0.0, 0.2), InfeasibleLinkError);
  EXPECT_THROW(offload_energy(task, dev, 0.0, 1.0), InfeasibleLinkError);
  EXPECT_THROW(affine_coefficients(task, dev, 0.0), InfeasibleLinkError);
}

TEST(Totals, TimeExamples) {
  const auto task = reference_task();
  const auto dev = reference_device();
  expect_rel(total_time(task, dev, 4.0, 0.0), 1.0);
  expect_rel(total_time(task, dev, 4.0, 1.0), 0.25);
  expect_rel(total_time(task, dev, 4.0, 0.5), 0.625);
}

TEST(Totals, EnergyBreakdown) {
  const auto task = reference_task();
  const auto dev = reference_device();

  const auto local_only = total_energy(task, dev, 4.0, 0.0);
  EXPECT_EQ(local_only.e_off, 0.0);
  EXPECT_EQ(local_only.e_total, local_only.e_local);

  const auto off_only = total_energy(task, dev, 4.0, 1.0);
  EXPECT_EQ(off_only.e_local, 0.0);
  EXPECT_EQ(off_only.e_total, off_only.e_off);

  const auto half = total_energy(task, dev, 4.0, 0.5);
  expect_rel(half.e_total, 0.5 + 1.875e-9);
  expect_rel(half.t_total, half.t_local + half.t_off);
  expect_rel(half.e_total, half.e_local + half.e_off);
}

TEST(Affine, ReferenceCoefficients) {
  const auto c = affine_coefficients(reference_task(), reference_device(), 1.0);
  expect_rel(c.full_offload, 1e-9);
  expect_rel(c.full_local, 1.0);
}

TEST(Affine, EqualCornersGiveFlatEnergy) {
  // Pick bandwidth so that A == B at se = 1: A = sigma^2 D / (h W) = eps c f^2 D.
  auto dev = reference_device();
  dev.bandwidth_hz = dev.noise_var / (dev.energy_coeff * 1000.0 * dev.cpu_hz * dev.cpu_hz);
  const auto task = reference_task();
  const auto c = affine_coefficients(task, dev, 1.0);
  expect_rel(c.full_offload, c.full_local, 1e-12);
  for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    expect_rel(total_energy(task, dev, 1.0, l).e_total, c.full_local, 1e-12);
  }
}

TEST(Affine, MatchesTotalEnergyOnRandomInstances) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_instance(rng);
    const auto c = affine_coefficients(inst.task, inst.device, inst.se);
    // Corner energies straight from the closed forms.
    const double a = (std::pow(2.0, inst.se) - 1.0) * inst.device.noise_var / inst.device.channel_gain *
                     inst.task.data_bits / (inst.device.bandwidth_hz * inst.se);
    const double b = inst.device.energy_coeff * inst.task.cycles_per_bit * inst.device.cpu_hz *
                     inst.device.cpu_hz * inst.task.data_bits;
    expect_rel(c.full_offload, a, 1e-12);
    expect_rel(c.full_local, b, 1e-12);
    expect_rel(total_energy(inst.task, inst.device, inst.se, 0.3).e_total, 0.3 * a + 0.7 * b, 1e-12);
  }
}

TEST(Properties, CornerIdentitiesAndMonotonePieces) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng);
    EXPECT_EQ(offload_energy(inst.task, inst.device, inst.se, 0.0), 0.0);
    EXPECT_EQ(offload_time(inst.task, inst.device, inst.se, 0.0), 0.0);
    EXPECT_EQ(local_energy(inst.task, inst.device, 1.0), 0.0);
    EXPECT_EQ(local_time(inst.task, inst.device, 1.0), 0.0);
    double prev_local = INFINITY, prev_off = -INFINITY;
    for (int k = 0; k <= 10; ++k) {
      const auto e = total_energy(inst.task, inst.device, inst.se, k / 10.0);
      EXPECT_LE(e.e_local, prev_local);
      EXPECT_GE(e.e_off, prev_off);
      prev_local = e.e_local;
      prev_off = e.e_off;
    }
  }
}

TEST(Properties, OffloadEnergyRatioAcrossSpectralEfficiency) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(rng);
    const double se1 = inst.se;
    const double se2 = se1 + std::uniform_real_distribution<double>(0.01, 5.0)(rng);
    const double ratio = offload_energy(inst.task, inst.device, se2, 0.7) /
                         offload_energy(inst.task, inst.device, se1, 0.7);
    const double expected = ((std::pow(2.0, se2) - 1.0) / se2) * (se1 / (std::pow(2.0, se1) - 1.0));
    expect_rel(ratio, expected, 1e-12);
  }
}

TEST(Properties, HomogeneousInDataSize) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    auto inst = random_instance(rng);
    const auto base = total_energy(inst.task, inst.device, inst.se, 0.37);
    inst.task.data_bits *= 2.0;
    const auto doubled = total_energy(inst.task, inst.device, inst.se, 0.37);
    EXPECT_EQ(doubled.t_local, 2.0 * base.t_local);
    EXPECT_EQ(doubled.t_off, 2.0 * base.t_off);
    EXPECT_EQ(doubled.e_local, 2.0 * base.e_local);
    EXPECT_EQ(doubled.e_off, 2.0 * base.e_off);
    EXPECT_EQ(doubled.e_total, 2.0 * base.e_total);
  }
}

TEST(Validation, RejectsNonPositiveFieldsAndGainAboveOne) {
  EXPECT_NO_THROW(validate(reference_task()));
  EXPECT_NO_THROW(validate(reference_device()));
  EXPECT_THROW(validate(TaskSpec{0.0, 10.0}), DomainError);
  EXPECT_THROW(validate(TaskSpec{10.0, -1.0}), DomainError);
  auto dev = reference_device();
  dev.channel_gain = 1.5;
  EXPECT_THROW(validate(dev), DomainError);
  dev = reference_device();
  dev.noise_var = 0.0;
  EXPECT_THROW(validate(dev), DomainError);
}
