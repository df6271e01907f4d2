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

#include "szcov/ingest.hpp"

#include <set>

namespace szcov {

void CountTable::validate() const {
  if (static_cast<Index>(taxa.size()) != counts.cols())
    throw InputError("taxa name count differs from column count");
  if (!groups.empty() && static_cast<Index>(groups.size()) != counts.rows())
    throw InputError("group label count differs from sample count");
  std::set<std::string_view> seen;
  for (const auto& t : taxa)
    if (!seen.insert(t).second) throw InputError("duplicate taxon name '" + t + "'");
  for (Index i = 0; i < counts.rows(); ++i)
    for (Index j = 0; j < counts.cols(); ++j)
      if (counts(i, j) < 0)
        throw InputError("negative count in row " + std::to_string(i) + ", taxon '" +
                         taxa[static_cast<std::size_t>(j)] + "'");
}

Index CountTable::taxon_index(std::string_view name) const {
  for (std::size_t j = 0; j < taxa.size(); ++j)
    if (taxa[j] == name) return static_cast<Index>(j);
  throw InputError("taxon '" + std::string(name) + "' not found in count table");
}

CountTable CountTable::select_rows(const std::vector<Index>& rows) const {
  CountTable out;
  out.taxa = taxa;
  out.counts.resize(static_cast<Index>(rows.size()), counts.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.counts.row(static_cast<Index>(k)) = counts.row(rows[k]);
    if (!groups.empty()) out.groups.push_back(groups[static_cast<std::size_t>(rows[k])]);
  }
  return out;
}

CountTable parse_count_table(const csv::Table& table) {
  const Index group_col = table.find(kGroupColumn);
  CountTable out;
  std::vector<Index> cols;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (static_cast<Index>(j) == group_col) continue;
    cols.push_back(static_cast<Index>(j));
    out.taxa.push_back(table.header[j]);
  }
  const auto n = static_cast<Index>(table.rows.size());
  out.counts.resize(n, static_cast<Index>(cols.size()));
  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto j = static_cast<std::size_t>(cols[k]);
      out.counts(i, static_cast<Index>(k)) = csv::parse_integer(
          row[j], table.source + ": data row " + std::to_string(i + 1) + ", column '" +
                      table.header[j] + "'");
    }
    if (group_col >= 0) out.groups.push_back(row[static_cast<std::size_t>(group_col)]);
  }
  out.validate();
  return out;
}

CountTable read_count_table(const std::filesystem::path& path) {
  return parse_count_table(csv::read_table(path));
}

std::string format_count_table(const CountTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.taxa.size(); ++j) {
    if (j) out += ',';
    out += table.taxa[j];
  }
  if (!table.groups.empty()) out += "," + std::string(kGroupColumn);
  out += '\n';
  for (Index i = 0; i < table.samples(); ++i) {
    for (Index j = 0; j < table.taxa_count(); ++j) {
      if (j) out += ',';
      out += std::to_string(table.counts(i, j));
    }
    if (!table.groups.empty()) out += "," + table.groups[static_cast<std::size_t>(i)];
    out += '\n';
  }
  return out;
}

CountTable prevalence_filter(const CountTable& table, double min_fraction,
                             std::optional<Index> always_keep) {
  if (!(min_fraction > 0.0 && min_fraction <= 1.0))
    throw InputError("prevalence threshold must lie in (0, 1]");
  const double n = static_cast<double>(table.samples());
  std::vector<Index> keep;
  for (Index j = 0; j < table.taxa_count(); ++j) {
    const auto present = (table.counts.col(j).array() > 0).count();
    if ((always_keep && *always_keep == j) || static_cast<double>(present) / n >= min_fraction)
      keep.push_back(j);
  }
  CountTable out;
  out.groups = table.groups;
  out.counts.resize(table.samples(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.counts.col(static_cast<Index>(k)) = table.counts.col(keep[k]);
    out.taxa.push_back(table.taxa[static_cast<std::size_t>(keep[k])]);
  }
  return out;
}

ReferenceChoice validate_reference(const CountTable& table, Index index) {
  if (index < 0 || index >= table.taxa_count())
    throw InputError("reference column " + std::to_string(index) + " is out of range");
  const auto& name = table.taxa[static_cast<std::size_t>(index)];
  for (Index i = 0; i < table.samples(); ++i)
    if (table.counts(i, index) <= 0)
      throw InputError("reference taxon '" + name + "' has a zero count in row " +
                       std::to_string(i));
  return {index, name};
}

LogRatioResult log_ratio_transform(const CountTable& table, const ReferenceChoice& ref) {
  validate_reference(table, ref.index);
  const Index d = table.taxa_count() - 1;
  if (d < 1) throw InputError("count table has no taxa besides the reference");
  std::vector<std::string> names;
  std::vector<Index> cols;
  for (Index j = 0; j < table.taxa_count(); ++j)
    if (j != ref.index) {
      cols.push_back(j);
      names.push_back(table.taxa[static_cast<std::size_t>(j)]);
    }

  LogRatioResult out;
  for (Index i = 0; i < table.samples(); ++i) {
    bool any = false;
    for (Index j : cols) any = any || table.counts(i, j) > 0;
    (any ? out.kept_rows : out.dropped_rows).push_back(i);
  }
  if (out.kept_rows.empty()) throw InputError("every sample has only the reference taxon");

  const auto n = static_cast<Index>(out.kept_rows.size());
  MatrixXd values(n, d);
  MaskMatrix mask(n, d);
  for (Index r = 0; r < n; ++r) {
    const Index i = out.kept_rows[static_cast<std::size_t>(r)];
    const double denom = static_cast<double>(table.counts(i, ref.index));
    for (Index k = 0; k < d; ++k) {
      const auto z = table.counts(i, cols[static_cast<std::size_t>(k)]);
      mask(r, k) = z > 0 ? 1 : 0;
      values(r, k) = z > 0 ? std::log(static_cast<double>(z) / denom) : not_available<double>;
    }
    if (!table.groups.empty()) out.groups.push_back(table.groups[static_cast<std::size_t>(i)]);
  }
  out.data = MaskedDataset(std::move(values), ObservationMask(std::move(mask)), std::move(names));
  return out;
}

}  // namespace szcov
