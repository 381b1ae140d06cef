#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mecoff {

inline constexpr double kEarthRadiusM = 6371000.0;

struct LatLon {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
};

struct TrajectorySample {
  std::int64_t timestamp_ms = 0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  LatLon position() const { return {lat_deg, lon_deg}; }
};

struct Trip {
  std::string id;
  std::vector<TrajectorySample> samples;  // strictly increasing timestamps
};

struct BaseStationGeom {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double radius_m = 3000.0;  // cell radius R

  LatLon position() const { return {lat_deg, lon_deg}; }
};

/// Throws DomainError on out-of-range coordinates or a radius outside 100 m - 100 km.
void validate(const BaseStationGeom& bs);

struct VedColumns {
  std::string trip = "Trip";
  std::string timestamp = "Timestamp(ms)";
  std::string latitude = "Latitude[deg]";
  std::string longitude = "Longitude[deg]";
};

struct VedParseResult {
  std::vector<Trip> trips;  // in order of first appearance in the file
  std::size_t rows_read = 0;
  std::size_t rows_skipped = 0;
  std::vector<std::string> warnings;  // one per skipped row
};

/// Reads a VED-style CSV. Rows are grouped by trip, sorted by timestamp, and
/// duplicate timestamps within a trip keep the first row. Unparseable rows are
/// skipped with a warning; more than 10% skipped rows is a ParseError. A
/// missing column is a SchemaError.
VedParseResult parse_ved_csv(const std::filesystem::path& path, const VedColumns& columns = {});

/// Great-circle distance on a sphere of radius kEarthRadiusM.
double haversine_m(LatLon a, LatLon b);

struct GapBounds {
  std::int64_t min_dt_ms = 1000;
  std::int64_t max_dt_ms = 4000;

  bool admits(std::int64_t dt_ms) const { return dt_ms >= min_dt_ms && dt_ms <= max_dt_ms; }
};

struct VelocityPoint {
  std::int64_t timestamp_ms = 0;  // timestamp of the later sample of the pair
  std::int64_t dt_ms = 0;
  double distance_m = 0.0;
  double velocity_mps = 0.0;
  bool gap = false;  // dt outside the bounds; excluded from statistics
};

/// One point per consecutive sample pair. Throws InsufficientDataError for
/// fewer than two samples.
std::vector<VelocityPoint> estimate_velocity(std::span<const TrajectorySample> trip,
                                             const GapBounds& bounds = {});

/// Splits a trip at every gap pair. Segments with a single sample are kept.
std::vector<std::vector<TrajectorySample>> split_at_gaps(std::span<const TrajectorySample> trip,
                                                         const GapBounds& bounds = {});

struct VelocityStats {
  std::size_t count = 0;  // non-gap pairs
  std::size_t gaps = 0;
  double mean_mps = 0.0;
  double min_mps = 0.0;
  double max_mps = 0.0;
  double max_distance_m = 0.0;  // largest non-gap inter-sample distance
};

VelocityStats velocity_stats(std::span<const VelocityPoint> points);

struct AngularPosition {
  double phi_rad = 0.0;    // bearing from the BS, counter-clockwise from east
  double d_over_r = 0.0;   // haversine(sample, bs) / R
};

/// Bearing of the sample around the base station from equirectangular
/// east/north offsets. Throws DomainError when the sample sits on the BS.
AngularPosition angular_position(const TrajectorySample& sample, const BaseStationGeom& bs);

}  // namespace mecoff
