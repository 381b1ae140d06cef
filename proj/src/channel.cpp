#include "mecoff/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "mecoff/errors.hpp"
#include "text_util.hpp"

namespace mecoff {

std::string_view to_string(SeMode mode) {
  switch (mode) {
    case SeMode::Zak: return "zak";
    case SeMode::Sfft: return "sfft";
    case SeMode::Constant: return "constant";
    case SeMode::CustomTable: return "custom-table";
  }
  return "unknown";
}

SeModel SeModel::constant(double se, double carrier_hz) {
  if (!(se >= 0.0) || !std::isfinite(se)) throw DomainError("constant se must be finite and >= 0");
  return SeModel(SeMode::Constant, carrier_hz, {{0.0, se}});
}

SeModel SeModel::from_table(std::vector<SePoint> table, SeMode mode, double carrier_hz) {
  if (table.empty()) throw DomainError("se table is empty");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].velocity_mps) || !std::isfinite(table[i].se)) {
      throw DomainError("se table entry " + std::to_string(i) + " is not finite");
    }
    if (table[i].se < 0.0) throw DomainError("se table entry " + std::to_string(i) + " has negative se");
    if (i > 0 && !(table[i].velocity_mps > table[i - 1].velocity_mps)) {
      throw DomainError("se table velocities must be strictly increasing at entry " +
                        std::to_string(i));
    }
  }
  if (!(carrier_hz > 0.0)) throw DomainError("carrier frequency must be > 0");
  return SeModel(mode, carrier_hz, std::move(table));
}

// Velocities in m/s (0 to 500 km/h).
SeModel SeModel::builtin_zak() {
  return from_table({{0.0, 6.2},
                     {20.0, 6.0},
                     {40.0, 5.7},
                     {60.0, 5.3},
                     {80.0, 4.9},
                     {100.0, 4.6},
                     {120.0, 4.35},
                     {139.0, 4.2}},
                    SeMode::Zak);
}

SeModel SeModel::builtin_sfft() {
  return from_table({{0.0, 6.0},
                     {20.0, 5.5},
                     {40.0, 4.8},
                     {60.0, 4.1},
                     {80.0, 3.5},
                     {100.0, 3.0},
                     {120.0, 2.6},
                     {139.0, 2.3}},
                    SeMode::Sfft);
}

double SeModel::min_se() const {
  return std::min_element(table_.begin(), table_.end(),
                          [](const SePoint& a, const SePoint& b) { return a.se < b.se; })
      ->se;
}

double SeModel::max_se() const {
  return std::max_element(table_.begin(), table_.end(),
                          [](const SePoint& a, const SePoint& b) { return a.se < b.se; })
      ->se;
}

double calc_se(const SeModel& model, double velocity_mps) {
  if (!(velocity_mps >= 0.0)) throw DomainError("velocity must be >= 0");
  const auto& t = model.table();
  if (model.mode() == SeMode::Constant || velocity_mps <= t.front().velocity_mps) return t.front().se;
  if (velocity_mps >= t.back().velocity_mps) return t.back().se;

  auto hi = std::upper_bound(t.begin(), t.end(), velocity_mps,
                             [](double v, const SePoint& p) { return v < p.velocity_mps; });
  auto lo = std::prev(hi);
  if (velocity_mps == lo->velocity_mps) return lo->se;
  const double frac = (velocity_mps - lo->velocity_mps) / (hi->velocity_mps - lo->velocity_mps);
  return lo->se + frac * (hi->se - lo->se);
}

SeModel load_se_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open se table '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file, header required", 1);
  ++line_no;
  if (detail::trim(line) != kSeTableHeader) {
    throw ParseError("expected header '" + std::string(kSeTableHeader) + "'", line_no);
  }

  std::vector<SePoint> table;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_csv(trimmed);
    if (fields.size() != 2) throw ParseError("expected 2 columns", line_no);
    SePoint p;
    if (!detail::parse_double(fields[0], p.velocity_mps) || !detail::parse_double(fields[1], p.se)) {
      throw ParseError("non-numeric field", line_no);
    }
    if (p.velocity_mps < 0.0) throw ParseError("negative velocity", line_no);
    if (p.se < 0.0) throw ParseError("negative se", line_no);
    if (!table.empty() && !(p.velocity_mps > table.back().velocity_mps)) {
      throw ParseError("velocity not strictly increasing", line_no);
    }
    table.push_back(p);
  }
  if (table.empty()) throw ParseError("table has no rows", line_no);
  return SeModel::from_table(std::move(table));
}

void save_se_table(const SeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write se table '" + path.string() + "'");
  out << kSeTableHeader << '\n';
  for (const auto& p : model.table()) {
    out << detail::format_exact(p.velocity_mps) << ',' << detail::format_exact(p.se) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace mecoff
