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

// K-fold cross-validation of the thresholding and precision penalties.
//
// Covariance loss: ||s_lambda(S_train) - S_valid||_F, where both sides use the
// same base estimator. Precision loss: a function of R = S_valid Omega_train - I.
// Both are averaged over folds; the smallest minimizing grid value wins.

#ifndef SZCOV_TUNING_HPP
#define SZCOV_TUNING_HPP

#include "szcov/threshold.hpp"

#include <string_view>

namespace szcov {

/// Which moment estimator feeds the penalized fit.
enum class CovarianceBase { renormalized, naive };

std::string_view to_string(CovarianceBase b);
CovarianceBase parse_covariance_base(std::string_view s);

CovarianceEstimate base_covariance(const MaskedDataset& data, CovarianceBase base);

enum class PrecisionLoss {
  trace_of_square,  // tr(R^T R) = ||R||_F^2
  square_of_trace,  // (tr R)^2
};

std::string_view to_string(PrecisionLoss l);
PrecisionLoss parse_precision_loss(std::string_view s);

struct CvConfig {
  int folds = 5;
  /// Ascending, strictly positive. Empty selects the default grid.
  std::vector<double> grid;
  PrecisionLoss precision_loss = PrecisionLoss::trace_of_square;
  Seed seed = 0;
  unsigned threads = 1;

  /// Throws InputError if folds < 2 or the grid is not ascending and positive.
  void validate() const;
};

struct CvResult {
  double selected = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_loss;  // +inf where some fold failed
};

/// fold[i] in [0, folds): a seeded shuffle dealt round-robin, so fold sizes
/// differ by at most one.
std::vector<int> assign_folds(Index rows, int folds, Seed seed);

/// 50 log-spaced values from max|S_ij| / 1000 up to max|S_ij|.
std::vector<double> default_threshold_grid(const MatrixXd& sigma);

/// 20 log-spaced values in [0.001, 1].
std::vector<double> default_precision_grid();

CvResult cv_covariance(const MaskedDataset& data, ThresholdKind kind, const CvConfig& cfg,
                       CovarianceBase base = CovarianceBase::renormalized,
                       bool exclude_diagonal = false);

/// Grid points where a fold's column program is infeasible get loss +inf.
/// Throws InfeasibleError when that happens at every grid point.
CvResult cv_precision(const MaskedDataset& data, const CvConfig& cfg,
                      CovarianceBase base = CovarianceBase::renormalized);

double precision_loss(const MatrixXd& sigma_valid, const MatrixXd& omega, PrecisionLoss kind);

/// First index attaining the minimum; -1 if every value is +inf.
Index argmin_first(const std::vector<double>& values);

}  // namespace szcov

#endif  // SZCOV_TUNING_HPP
