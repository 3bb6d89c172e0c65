#include "pspectra/emit.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace pspectra {

namespace {

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<long long>(c))
    return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", std::get<double>(c));
    return buf;
  }
  return std::get<std::string>(c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  return std::get<std::string>(c);
}

void check_rectangular(const Table& table) {
  if (table.columns.empty() || table.rows.empty())
    throw std::invalid_argument("table must be non-empty");
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw std::invalid_argument("table rows must match the header width");
}

}  // namespace

std::string to_csv(const Table& table) {
  check_rectangular(table);
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const Meta& meta) {
  check_rectangular(table);
  nlohmann::ordered_json root;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [key, cell] : meta) m[key] = json_cell(cell);
  root["meta"] = std::move(m);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

void emit(const Table& table, const Meta& meta, const std::string& format,
          const std::string& path) {
  std::string payload;
  if (format == "csv")
    payload = to_csv(table);
  else if (format == "json")
    payload = to_json(table, meta);
  else
    throw std::invalid_argument("format must be csv or json, got " + format);

  if (path.empty() || path == "-") {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path " + path);
  f << payload;
  f.flush();
  if (!f) throw std::runtime_error("write failed for output path " + path);
}

}  // namespace pspectra
