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

// Taxa count tables and their log-ratio transform against a reference taxon:
//
//     X_ij = log(Z_ij / Z_i,ref)   if Z_ij > 0,   NA otherwise.
//
// Zero counts are structural; no pseudo-counts are ever added.

#ifndef SZCOV_INGEST_HPP
#define SZCOV_INGEST_HPP

#include "szcov/csv.hpp"

#include <optional>

namespace szcov {

inline constexpr std::string_view kGroupColumn = "group";

struct CountTable {
  MatrixXi64 counts;               // samples x taxa, all >= 0
  std::vector<std::string> taxa;   // unique
  std::vector<std::string> groups; // one label per sample, or empty

  /// Throws InputError on negative counts, duplicate names or shape mismatch.
  void validate() const;
  Index samples() const { return counts.rows(); }
  Index taxa_count() const { return counts.cols(); }
  /// Column of `name`; throws InputError naming the taxon if absent.
  Index taxon_index(std::string_view name) const;
  CountTable select_rows(const std::vector<Index>& rows) const;
};

/// Header of taxa names plus an optional `group` column; integer body.
CountTable parse_count_table(const csv::Table& table);
CountTable read_count_table(const std::filesystem::path& path);
std::string format_count_table(const CountTable& table);

/// Keeps the taxa that are nonzero in at least `min_fraction` of samples,
/// plus `always_keep` if given. Column order is preserved.
CountTable prevalence_filter(const CountTable& table, double min_fraction,
                             std::optional<Index> always_keep = std::nullopt);

struct ReferenceChoice {
  Index index = 0;
  std::string name;
};

/// Throws InputError naming the first row with a zero count in column `index`.
ReferenceChoice validate_reference(const CountTable& table, Index index);

struct LogRatioResult {
  MaskedDataset data;               // reference column removed
  std::vector<Index> kept_rows;     // table rows that made it into `data`
  std::vector<Index> dropped_rows;  // rows with only the reference nonzero
  std::vector<std::string> groups;  // labels of kept rows, if the table has them
};

LogRatioResult log_ratio_transform(const CountTable& table, const ReferenceChoice& ref);

}  // namespace szcov

#endif  // SZCOV_INGEST_HPP
