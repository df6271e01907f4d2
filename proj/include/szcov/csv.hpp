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

// Comma-separated text I/O. Every file has a header row; fields are unquoted
// and may not contain commas. Datasets mark structural zeros with the token
// NA. Numbers are written in shortest round-trip form, so a write followed by
// a read reproduces every double exactly.

#ifndef SZCOV_CSV_HPP
#define SZCOV_CSV_HPP

#include "szcov/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace szcov::csv {

inline constexpr std::string_view kMissingToken = "NA";

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // file name for diagnostics

  /// Column position of `name`, or -1.
  Index find(std::string_view name) const;
};

/// Throws InputError on an empty input or a row whose field count differs
/// from the header. Blank lines are skipped; CRLF endings are accepted.
Table parse_table(std::istream& in, const std::string& source);
Table read_table(const std::filesystem::path& path);

/// Parses a finite double; throws InputError naming `where` otherwise.
double parse_double(std::string_view field, const std::string& where);
std::int64_t parse_integer(std::string_view field, const std::string& where);

/// Shortest string that parses back to exactly `v`.
std::string format_double(double v);

MaskedDataset parse_dataset(const Table& table);
MaskedDataset read_dataset(const std::filesystem::path& path);
std::string format_dataset(const MaskedDataset& data);

ObservationMask parse_mask(const Table& table);
std::string format_mask(const ObservationMask& mask, const std::vector<std::string>& names);

/// Dense real matrix with a header of column names.
MatrixXd parse_matrix(const Table& table);
MatrixXd read_matrix(const std::filesystem::path& path);
std::string format_matrix(const MatrixXd& m, const std::vector<std::string>& names);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace szcov::csv

#endif  // SZCOV_CSV_HPP
