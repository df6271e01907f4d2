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

#ifndef SZCOV_DATASET_HPP
#define SZCOV_DATASET_HPP

#include "szcov/mask.hpp"

#include <string>
#include <utility>

namespace szcov {

template <typename Scalar>
inline constexpr Scalar not_available = std::numeric_limits<Scalar>::quiet_NaN();

/// Real-valued samples paired with their structural-zero pattern. Entries at
/// unobserved positions hold the NaN sentinel and are never read.
template <typename Scalar>
class BasicMaskedDataset {
 public:
  using Matrix = MatrixX<Scalar>;

  BasicMaskedDataset() = default;

  /// Throws InputError when shapes disagree or an observed value is not finite.
  BasicMaskedDataset(Matrix values, ObservationMask mask,
                     std::vector<std::string> names = {})
      : values_(std::move(values)), mask_(std::move(mask)), names_(std::move(names)) {
    if (values_.rows() != mask_.rows() || values_.cols() != mask_.cols())
      throw InputError("values and mask shapes differ");
    if (!names_.empty() && static_cast<Index>(names_.size()) != values_.cols())
      throw InputError("component name count differs from column count");
    for (Index j = 0; j < values_.cols(); ++j) {
      for (Index i = 0; i < values_.rows(); ++i) {
        if (!mask_.observed(i, j)) {
          values_(i, j) = not_available<Scalar>;
        } else if (!std::isfinite(values_(i, j))) {
          throw InputError("observed value at (" + std::to_string(i) + "," +
                           std::to_string(j) + ") is not finite");
        }
      }
    }
  }

  static BasicMaskedDataset fully_observed(Matrix values) {
    auto mask = ObservationMask::all_observed(values.rows(), values.cols());
    return BasicMaskedDataset(std::move(values), std::move(mask));
  }

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const ObservationMask& mask() const { return mask_; }
  bool observed(Index i, Index j) const { return mask_.observed(i, j); }

  /// Names given at construction, or V1..Vd.
  std::vector<std::string> names() const {
    if (!names_.empty()) return names_;
    std::vector<std::string> out;
    for (Index j = 0; j < cols(); ++j) out.push_back("V" + std::to_string(j + 1));
    return out;
  }

  /// Values with unobserved positions replaced by `fill`.
  Matrix filled(Scalar fill = Scalar(0)) const {
    return mask_.entries().template cast<bool>().select(values_, Matrix::Constant(rows(), cols(), fill));
  }

  BasicMaskedDataset select_rows(const std::vector<Index>& rows) const {
    Matrix v(static_cast<Index>(rows.size()), cols());
    MaskMatrix m(static_cast<Index>(rows.size()), cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      v.row(static_cast<Index>(k)) = values_.row(rows[k]);
      m.row(static_cast<Index>(k)) = mask_.entries().row(rows[k]);
    }
    return BasicMaskedDataset(std::move(v), ObservationMask(std::move(m)), names_);
  }

  /// Restricts to `columns`. Rows left with nothing observed are dropped; the
  /// surviving original row indices are written to `kept_rows` if given.
  BasicMaskedDataset select_columns(const std::vector<Index>& columns,
                                    std::vector<Index>* kept_rows = nullptr) const {
    std::vector<Index> keep;
    for (Index i = 0; i < rows(); ++i)
      for (Index c : columns)
        if (mask_.observed(i, c)) {
          keep.push_back(i);
          break;
        }
    const auto n = static_cast<Index>(keep.size());
    const auto d = static_cast<Index>(columns.size());
    Matrix v(n, d);
    MaskMatrix m(n, d);
    std::vector<std::string> names;
    for (Index k = 0; k < d; ++k) {
      const Index c = columns[static_cast<std::size_t>(k)];
      if (!names_.empty()) names.push_back(names_[static_cast<std::size_t>(c)]);
      for (Index r = 0; r < n; ++r) {
        v(r, k) = values_(keep[static_cast<std::size_t>(r)], c);
        m(r, k) = mask_.entries()(keep[static_cast<std::size_t>(r)], c);
      }
    }
    if (kept_rows) *kept_rows = keep;
    return BasicMaskedDataset(std::move(v), ObservationMask(std::move(m)), std::move(names));
  }

 private:
  Matrix values_;
  ObservationMask mask_;
  std::vector<std::string> names_;
};

using MaskedDataset = BasicMaskedDataset<double>;

}  // namespace szcov

#endif  // SZCOV_DATASET_HPP
