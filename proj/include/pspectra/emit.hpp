#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pspectra {

// one table cell; integers and text stay exact, reals render as
// 17-significant-digit scientific notation in CSV
using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// ordered key/value pairs echoed into the JSON "meta" object
using Meta = std::vector<std::pair<std::string, Cell>>;

// CSV: header row + rows, LF line endings, deterministic formatting
std::string to_csv(const Table& table);

// JSON object {"meta": {...}, "rows": [{col: value, ...}, ...]}
std::string to_json(const Table& table, const Meta& meta);

// Serialize and write to path ("" or "-" selects stdout).  format is "csv"
// or "json".  Throws std::runtime_error when the path cannot be written.
void emit(const Table& table, const Meta& meta, const std::string& format,
          const std::string& path);

}  // namespace pspectra
