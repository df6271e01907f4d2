// Copyright 2026 The szcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "szcov/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <system_error>

namespace szcov::csv {

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string cell(const Table& t, std::size_t row, Index col) {
  return t.source + ": data row " + std::to_string(row + 1) + ", column '" +
         t.header[static_cast<std::size_t>(col)] + "'";
}

std::string join_header(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out += ',';
    out += names[j];
  }
  out += '\n';
  return out;
}

}  // namespace

Index Table::find(std::string_view name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return static_cast<Index>(j);
  return -1;
}

Table parse_table(std::istream& in, const std::string& source) {
  Table t;
  t.source = source;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(t.header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw InputError(source + ": empty file");
  return t;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return parse_table(in, path.string());
}

double parse_double(std::string_view field, const std::string& where) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const char* first = field.data();
  if (first != end && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, end, v);
  if (ec != std::errc() || ptr != end || field.empty() || !std::isfinite(v))
    throw InputError(where + ": '" + std::string(field) + "' is not a finite number");
  return v;
}

std::int64_t parse_integer(std::string_view field, const std::string& where) {
  std::int64_t v = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty())
    throw InputError(where + ": '" + std::string(field) + "' is not an integer");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf, ptr);
}

MaskedDataset parse_dataset(const Table& table) {
  const auto n = static_cast<Index>(table.rows.size());
  const auto d = static_cast<Index>(table.header.size());
  MatrixXd values(n, d);
  MaskMatrix mask(n, d);
  for (Index i = 0; i < n; ++i) {
    bool any = false;
    for (Index j = 0; j < d; ++j) {
      const auto& f = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (f == kMissingToken) {
        values(i, j) = not_available<double>;
        mask(i, j) = 0;
      } else {
        values(i, j) = parse_double(f, cell(table, static_cast<std::size_t>(i), j));
        mask(i, j) = 1;
        any = true;
      }
    }
    if (!any)
      throw InputError(table.source + ": data row " + std::to_string(i + 1) +
                       " has no observed component");
  }
  return MaskedDataset(std::move(values), ObservationMask(std::move(mask)), table.header);
}

MaskedDataset read_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_table(path));
}

std::string format_dataset(const MaskedDataset& data) {
  std::string out = join_header(data.names());
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (j) out += ',';
      out += data.observed(i, j) ? format_double(data.values()(i, j)) : std::string(kMissingToken);
    }
    out += '\n';
  }
  return out;
}

ObservationMask parse_mask(const Table& table) {
  const auto n = static_cast<Index>(table.rows.size());
  const auto d = static_cast<Index>(table.header.size());
  MaskMatrix m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) {
      const auto& f = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (f != "0" && f != "1")
        throw InputError(cell(table, static_cast<std::size_t>(i), j) + ": mask entry '" + f +
                         "' is not 0 or 1");
      m(i, j) = f == "1" ? 1 : 0;
    }
  return ObservationMask(std::move(m));
}

std::string format_mask(const ObservationMask& mask, const std::vector<std::string>& names) {
  if (static_cast<Index>(names.size()) != mask.cols())
    throw InputError("mask header length differs from column count");
  std::string out = join_header(names);
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      if (j) out += ',';
      out += mask.observed(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

MatrixXd parse_matrix(const Table& table) {
  const auto n = static_cast<Index>(table.rows.size());
  const auto d = static_cast<Index>(table.header.size());
  MatrixXd m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j)
      m(i, j) = parse_double(table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                             cell(table, static_cast<std::size_t>(i), j));
  return m;
}

MatrixXd read_matrix(const std::filesystem::path& path) { return parse_matrix(read_table(path)); }

std::string format_matrix(const MatrixXd& m, const std::vector<std::string>& names) {
  if (static_cast<Index>(names.size()) != m.cols())
    throw InputError("matrix header length differs from column count");
  std::string out = join_header(names);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace szcov::csv
