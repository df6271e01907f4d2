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

// Two-class linear discriminant analysis on structural-zero data. An
// observation x with observed index set A is scored against each class r by
//
//     delta_r = x_A^T S_AA^-1 mu_rA - 1/2 mu_rA^T S_AA^-1 mu_rA,
//
// and assigned to class 1 only when delta_1 > delta_2. Class labels are 1 and 2.

#ifndef SZCOV_CLASSIFY_HPP
#define SZCOV_CLASSIFY_HPP

#include "szcov/tuning.hpp"

#include <string_view>

namespace szcov {

enum class LdaEstimator { soft, hard, clime };

std::string_view to_string(LdaEstimator e);
LdaEstimator parse_lda_estimator(std::string_view s);

/// Welch statistic unless `pooled`. Components observed in fewer than two
/// rows of either class score 0.
VectorXd t_statistics(const MaskedDataset& data, const std::vector<int>& labels,
                      bool pooled = false);

/// The k components with the largest |t|, ties to the lower index, in
/// decreasing order of |t|.
std::vector<Index> t_select(const MaskedDataset& data, const std::vector<int>& labels, Index k,
                            bool pooled = false);

struct DiscriminantModel {
  VectorXd mu1, mu2;   // available-case class means
  MatrixXd sigma;      // shared covariance, symmetric
  LdaEstimator estimator = LdaEstimator::soft;
  double penalty = 0.0;     // selected lambda or lambda_omega
  double ridge_used = 0.0;  // added to Omega before inversion (clime only)
};

/// Class means from each class's rows; covariance from the class-centred
/// pooled rows, penalized with a cross-validated parameter.
DiscriminantModel fit_lda(const MaskedDataset& train, const std::vector<int>& labels,
                          LdaEstimator estimator, const CvConfig& tuning);

struct Discriminant {
  double delta1 = 0.0, delta2 = 0.0;
  int label = 2;
  double ridge_used = 0.0;  // added to S_AA before solving
};

/// Scores x restricted to `observed`; entries of x elsewhere are never read.
/// Throws InputError if `observed` is empty.
Discriminant discriminant(const VectorXd& x, const std::vector<Index>& observed,
                          const DiscriminantModel& model);

inline int decide(double delta1, double delta2) { return delta1 - delta2 > 0.0 ? 1 : 2; }

struct EvaluationConfig {
  Index k = 10;
  LdaEstimator estimator = LdaEstimator::soft;
  int repeats = 20;
  double train_fraction = 5.0 / 6.0;
  int cv_folds = 5;
  bool pooled_t = false;
  Seed seed = 0;
  unsigned threads = 1;
};

struct RepeatResult {
  double class1_pct = 0.0, class2_pct = 0.0, overall_pct = 0.0;
  Index test1 = 0, test2 = 0;
  Index unscored = 0;  // test rows with no selected component observed
  double penalty = 0.0;
  double max_ridge = 0.0;
};

struct EvaluationReport {
  double class1_pct = 0.0, class2_pct = 0.0, overall_pct = 0.0;
  int repeats = 0;
  std::vector<RepeatResult> per_repeat;
};

/// Repeated stratified train/test splits: select k components on the
/// training part, fit, classify the test part. A test row with none of the
/// selected components observed scores delta_1 = delta_2 and goes to class 2.
EvaluationReport evaluate(const MaskedDataset& data, const std::vector<int>& labels,
                          const EvaluationConfig& cfg);

}  // namespace szcov

#endif  // SZCOV_CLASSIFY_HPP
