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

// Available-case moment estimators for data with structural zeros.
//
// Each covariance entry averages centred cross-products over exactly the rows
// where both components are present, with divisor |n(l,m)|. Centring uses the
// per-component available-case mean, not a pair-specific one. Pairs that are
// never co-observed get 0.

#ifndef SZCOV_COVARIANCE_HPP
#define SZCOV_COVARIANCE_HPP

#include "szcov/dataset.hpp"

namespace szcov {

template <typename Scalar>
struct MeanEstimate {
  VectorX<Scalar> mean;
  /// Components with no observation; their mean is reported as 0.
  std::vector<Index> unobserved;
};

template <typename Scalar>
struct BasicCovarianceEstimate {
  MatrixX<Scalar> sigma;
  CoObservationCounts counts;
  std::vector<std::pair<Index, Index>> zeroed_pairs;  // l <= m

  Index dim() const { return sigma.rows(); }
};

using CovarianceEstimate = BasicCovarianceEstimate<double>;

template <typename Scalar>
MeanEstimate<Scalar> available_means(const BasicMaskedDataset<Scalar>& data) {
  MeanEstimate<Scalar> out;
  out.mean = VectorX<Scalar>::Zero(data.cols());
  for (Index l = 0; l < data.cols(); ++l) {
    Scalar sum(0);
    Index count = 0;
    for (Index i = 0; i < data.rows(); ++i) {
      if (data.observed(i, l)) {
        sum += data.values()(i, l);
        ++count;
      }
    }
    if (count == 0)
      out.unobserved.push_back(l);
    else
      out.mean[l] = sum / static_cast<Scalar>(count);
  }
  return out;
}

template <typename Scalar>
BasicCovarianceEstimate<Scalar> renormalized_covariance(
    const BasicMaskedDataset<Scalar>& data) {
  using Matrix = MatrixX<Scalar>;
  const Index d = data.cols();
  const auto mu = available_means(data).mean;

  // Centred values, zero wherever the component is absent, so Y^T Y sums
  // only over co-observed rows.
  Matrix centred = data.filled(Scalar(0));
  centred.rowwise() -= mu.transpose();
  centred = data.mask().entries().template cast<bool>().select(centred, Matrix::Zero(data.rows(), d));

  Matrix cross = Matrix::Zero(d, d);
  cross.template selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());

  BasicCovarianceEstimate<Scalar> out;
  out.counts = pairwise_counts(data.mask());
  out.sigma.resize(d, d);
  for (Index m = 0; m < d; ++m) {
    for (Index l = m; l < d; ++l) {
      const auto c = out.counts.pair(l, m);
      Scalar v(0);
      if (c == 0)
        out.zeroed_pairs.emplace_back(m, l);
      else
        v = cross(l, m) / static_cast<Scalar>(c);
      out.sigma(l, m) = v;
      out.sigma(m, l) = v;
    }
  }
  std::sort(out.zeroed_pairs.begin(), out.zeroed_pairs.end());
  return out;
}

/// Baseline that treats structural zeros as literal 0 values: the ordinary
/// divisor-n sample covariance of the zero-filled matrix.
template <typename Scalar>
BasicCovarianceEstimate<Scalar> naive_covariance(const BasicMaskedDataset<Scalar>& data) {
  using Matrix = MatrixX<Scalar>;
  const Index d = data.cols();
  Matrix z = data.filled(Scalar(0));
  const VectorX<Scalar> mean = z.colwise().mean().transpose();
  z.rowwise() -= mean.transpose();
  Matrix cross = Matrix::Zero(d, d);
  cross.template selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());

  BasicCovarianceEstimate<Scalar> out;
  out.counts = pairwise_counts(data.mask());
  const Scalar n = static_cast<Scalar>(std::max<Index>(data.rows(), 1));
  out.sigma = Matrix(cross.template selfadjointView<Eigen::Lower>()) / n;
  return out;
}

}  // namespace szcov

#endif  // SZCOV_COVARIANCE_HPP
