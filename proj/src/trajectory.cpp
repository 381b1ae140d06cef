#include "mecoff/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "mecoff/errors.hpp"
#include "text_util.hpp"

namespace mecoff {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool valid_lat(double v) { return std::isfinite(v) && v >= -90.0 && v <= 90.0; }
bool valid_lon(double v) { return std::isfinite(v) && v >= -180.0 && v <= 180.0; }

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

void validate(const BaseStationGeom& bs) {
  if (!valid_lat(bs.lat_deg) || !valid_lon(bs.lon_deg)) {
    throw DomainError("base station coordinates out of range");
  }
  if (!(bs.radius_m >= 100.0 && bs.radius_m <= 100000.0)) {
    throw DomainError("base station radius must lie in [100 m, 100 km]");
  }
}

VedParseResult parse_ved_csv(const std::filesystem::path& path, const VedColumns& columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trip file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("trip file '" + path.string() + "' has no header");
  const auto header = detail::split_csv(detail::trim(line));
  const std::size_t trip_col = find_column(header, columns.trip);
  const std::size_t ts_col = find_column(header, columns.timestamp);
  const std::size_t lat_col = find_column(header, columns.latitude);
  const std::size_t lon_col = find_column(header, columns.longitude);
  const std::size_t needed = std::max({trip_col, ts_col, lat_col, lon_col}) + 1;

  VedParseResult result;
  std::unordered_map<std::string, std::size_t> trip_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    ++result.rows_read;

    const auto fields = detail::split_csv(trimmed);
    auto skip = [&](const std::string& why) {
      ++result.rows_skipped;
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < needed) {
      skip("expected at least " + std::to_string(needed) + " fields");
      continue;
    }
    double ts = 0.0;
    TrajectorySample s;
    if (fields[trip_col].empty()) {
      skip("empty trip id");
      continue;
    }
    if (!detail::parse_double(fields[ts_col], ts) || !std::isfinite(ts) || ts < 0.0 ||
        ts != std::floor(ts)) {
      skip("bad timestamp");
      continue;
    }
    if (!detail::parse_double(fields[lat_col], s.lat_deg) || !valid_lat(s.lat_deg) ||
        !detail::parse_double(fields[lon_col], s.lon_deg) || !valid_lon(s.lon_deg)) {
      skip("bad coordinates");
      continue;
    }
    s.timestamp_ms = static_cast<std::int64_t>(ts);

    auto [it, inserted] = trip_index.try_emplace(fields[trip_col], result.trips.size());
    if (inserted) result.trips.push_back(Trip{fields[trip_col], {}});
    result.trips[it->second].samples.push_back(s);
  }

  if (result.rows_skipped * 10 > result.rows_read) {
    throw ParseError("skipped " + std::to_string(result.rows_skipped) + " of " +
                         std::to_string(result.rows_read) + " rows (more than 10%) in '" +
                         path.string() + "'",
                     0);
  }

  for (auto& trip : result.trips) {
    auto& s = trip.samples;
    std::stable_sort(s.begin(), s.end(), [](const TrajectorySample& a, const TrajectorySample& b) {
      return a.timestamp_ms < b.timestamp_ms;
    });
    s.erase(std::unique(s.begin(), s.end(),
                        [](const TrajectorySample& a, const TrajectorySample& b) {
                          return a.timestamp_ms == b.timestamp_ms;
                        }),
            s.end());
  }
  return result;
}

double haversine_m(LatLon a, LatLon b) {
  const double phi1 = a.lat_deg * kDegToRad;
  const double phi2 = b.lat_deg * kDegToRad;
  const double dphi = (b.lat_deg - a.lat_deg) * kDegToRad;
  const double dlambda = (b.lon_deg - a.lon_deg) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<VelocityPoint> estimate_velocity(std::span<const TrajectorySample> trip,
                                             const GapBounds& bounds) {
  if (trip.size() < 2) throw InsufficientDataError("velocity estimation needs at least 2 samples");
  std::vector<VelocityPoint> out;
  out.reserve(trip.size() - 1);
  for (std::size_t i = 1; i < trip.size(); ++i) {
    VelocityPoint p;
    p.timestamp_ms = trip[i].timestamp_ms;
    p.dt_ms = trip[i].timestamp_ms - trip[i - 1].timestamp_ms;
    if (p.dt_ms <= 0) throw DomainError("trip timestamps must be strictly increasing");
    p.distance_m = haversine_m(trip[i - 1].position(), trip[i].position());
    p.velocity_mps = p.distance_m / (static_cast<double>(p.dt_ms) / 1000.0);
    p.gap = !bounds.admits(p.dt_ms);
    out.push_back(p);
  }
  return out;
}

std::vector<std::vector<TrajectorySample>> split_at_gaps(std::span<const TrajectorySample> trip,
                                                         const GapBounds& bounds) {
  std::vector<std::vector<TrajectorySample>> segments;
  for (std::size_t i = 0; i < trip.size(); ++i) {
    if (i == 0 || !bounds.admits(trip[i].timestamp_ms - trip[i - 1].timestamp_ms)) {
      segments.emplace_back();
    }
    segments.back().push_back(trip[i]);
  }
  return segments;
}

VelocityStats velocity_stats(std::span<const VelocityPoint> points) {
  VelocityStats st;
  double sum = 0.0;
  for (const auto& p : points) {
    if (p.gap) {
      ++st.gaps;
      continue;
    }
    if (st.count == 0) {
      st.min_mps = st.max_mps = p.velocity_mps;
    } else {
      st.min_mps = std::min(st.min_mps, p.velocity_mps);
      st.max_mps = std::max(st.max_mps, p.velocity_mps);
    }
    st.max_distance_m = std::max(st.max_distance_m, p.distance_m);
    sum += p.velocity_mps;
    ++st.count;
  }
  if (st.count > 0) st.mean_mps = sum / static_cast<double>(st.count);
  return st;
}

AngularPosition angular_position(const TrajectorySample& sample, const BaseStationGeom& bs) {
  const double east =
      (sample.lon_deg - bs.lon_deg) * kDegToRad * std::cos(bs.lat_deg * kDegToRad) * kEarthRadiusM;
  const double north = (sample.lat_deg - bs.lat_deg) * kDegToRad * kEarthRadiusM;
  if (east == 0.0 && north == 0.0) {
    throw DomainError("bearing undefined: sample coincides with the base station");
  }
  return {std::atan2(north, east), haversine_m(sample.position(), bs.position()) / bs.radius_m};
}

}  // namespace mecoff
