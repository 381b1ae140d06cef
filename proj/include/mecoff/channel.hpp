#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace mecoff {

enum class SeMode { Zak, Sfft, Constant, CustomTable };

std::string_view to_string(SeMode mode);

struct SePoint {
  double velocity_mps = 0.0;
  double se = 0.0;  // bits/s/Hz

  bool operator==(const SePoint&) const = default;
};

/// Velocity to spectral-efficiency map. The receiver behind it is treated as a
/// black box: the curve is a table, linearly interpolated between knots and
/// clamped to the end values outside the table. Immutable once built.
class SeModel {
 public:
  static SeModel constant(double se, double carrier_hz = kDefaultCarrierHz);
  /// Throws DomainError unless the table is nonempty, velocities strictly
  /// increase and every se is >= 0.
  static SeModel from_table(std::vector<SePoint> table, SeMode mode = SeMode::CustomTable,
                            double carrier_hz = kDefaultCarrierHz);

  // Illustrative curves, decreasing in velocity with zak >= sfft pointwise.
  // Shapes only; not measured values.
  static SeModel builtin_zak();
  static SeModel builtin_sfft();

  SeMode mode() const { return mode_; }
  double carrier_hz() const { return carrier_hz_; }
  const std::vector<SePoint>& table() const { return table_; }

  double min_se() const;
  double max_se() const;

  static constexpr double kDefaultCarrierHz = 4e9;

 private:
  SeModel(SeMode mode, double carrier_hz, std::vector<SePoint> table)
      : mode_(mode), carrier_hz_(carrier_hz), table_(std::move(table)) {}

  SeMode mode_;
  double carrier_hz_;
  std::vector<SePoint> table_;
};

double calc_se(const SeModel& model, double velocity_mps);

inline constexpr std::string_view kSeTableHeader = "velocity_mps,se_bits_per_s_per_hz";

/// Reads a two-column CSV with the mandatory header above. Errors name the
/// offending line.
SeModel load_se_table(const std::filesystem::path& path);
void save_se_table(const SeModel& model, const std::filesystem::path& path);

}  // namespace mecoff
