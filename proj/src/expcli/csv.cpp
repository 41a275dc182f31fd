// Copyright 2026 The qslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsl/expcli/table.hpp"

#include "qsl/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qsl::expcli {

namespace {

void append_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void Table::add(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != rows()) {
    std::ostringstream os;
    os << "Table: column '" << name << "' has " << values.size() << " rows, expected " << rows();
    throw UsageError(os.str());
  }
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return columns[i];
  throw UsageError("Table: no column named '" + name + "'");
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    if (c) out += ',';
    out += table.names[c];
  }
  out += '\n';
  const std::size_t n = table.rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      append_number(out, table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table out;
  if (!std::getline(in, line) || line.empty()) throw UsageError("parse_csv: missing header row");
  out.names = split(line);
  out.columns.assign(out.names.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != out.names.size()) {
      std::ostringstream os;
      os << "parse_csv: row " << row << " has " << cells.size() << " fields, expected " << out.names.size();
      throw UsageError(os.str());
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str() || *end != '\0') {
        std::ostringstream os;
        os << "parse_csv: row " << row << ", column '" << out.names[c] << "': not a number: '" << cells[c] << "'";
        throw UsageError(os.str());
      }
      out.columns[c].push_back(v);
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_csv(const Table& table, const std::filesystem::path& path) { write_file(path, format_csv(table)); }

}  // namespace qsl::expcli
