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

// Structural-zero patterns: which components are present in which sample.

#ifndef SZCOV_MASK_HPP
#define SZCOV_MASK_HPP

#include "szcov/common.hpp"

#include <utility>

namespace szcov {

using MaskMatrix = MatrixX<std::uint8_t>;

/// n x d binary pattern, 1 = component present, 0 = structural zero.
/// Every row has at least one present component.
class ObservationMask {
 public:
  ObservationMask() = default;
  /// Throws InputError on entries other than 0/1 or on an all-zero row.
  explicit ObservationMask(MaskMatrix entries);

  static ObservationMask all_observed(Index n, Index d);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  bool observed(Index i, Index j) const { return entries_(i, j) != 0; }
  const MaskMatrix& entries() const { return entries_; }

  /// Indices of the present components of row i, ascending.
  std::vector<Index> observed_indices(Index i) const;

  /// Mask as 0/1 doubles, handy for matrix products.
  MatrixXd as_real() const { return entries_.cast<double>(); }

  friend bool operator==(const ObservationMask& a, const ObservationMask& b) {
    return a.entries_.rows() == b.entries_.rows() &&
           a.entries_.cols() == b.entries_.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  MaskMatrix entries_;
};

/// |n(l)| on the diagonal and in `singleton`; |n(l,m)| off the diagonal.
struct CoObservationCounts {
  MatrixXi64 pair;
  VectorXi64 singleton;
  Index samples = 0;

  Index dim() const { return singleton.size(); }
};

CoObservationCounts pairwise_counts(const ObservationMask& mask);

struct A1Report {
  /// Unordered pairs (l <= m) whose co-observation fraction is below the
  /// threshold. Diagonal pairs (l, l) flag rarely observed components.
  std::vector<std::pair<Index, Index>> violations;
  double min_fraction_seen = 1.0;
  bool pass = true;
};

/// Empirical check of the pairwise-observation condition: pair_counts / n
/// is compared against `min_fraction`.
A1Report check_a1(const CoObservationCounts& counts, double min_fraction);

/// Per-component missingness probabilities rho_j in [0, 1).
class MaskDistribution {
 public:
  MaskDistribution() = default;
  explicit MaskDistribution(VectorXd rho);
  const VectorXd& rho() const { return rho_; }
  Index dim() const { return rho_.size(); }

 private:
  VectorXd rho_;
};

/// m_ij ~ Bernoulli(1 - rho_j) independently; all-zero rows are redrawn.
ObservationMask generate_mask(Index n, Index d, const MaskDistribution& dist,
                              Seed seed);

/// rho_j ~ U(lo, hi) independently; requires 0 <= lo < hi < 1.
MaskDistribution sample_rho(Index d, double lo, double hi, Seed seed);

}  // namespace szcov

#endif  // SZCOV_MASK_HPP
