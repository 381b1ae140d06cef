#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mecoff {

// Null renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

/// Records with a fixed column order.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

Format parse_format(std::string_view text);

inline constexpr int kSignificantDigits = 12;
inline constexpr std::string_view kTableSchema = "mecoff.table/1";

/// CSV: header line then one line per row, LF endings. JSON: an object
/// {"schema", "name", "columns", "records"} where records are objects keyed
/// by column in column order. Doubles carry 12 significant digits.
std::string render(const Table& table, Format format);

/// Writes render(table, format) to `path`; IoError names the path on failure.
void emit_results(const Table& table, const std::filesystem::path& path, Format format);

}  // namespace mecoff
