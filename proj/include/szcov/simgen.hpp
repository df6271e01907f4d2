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

// Band and cluster Gaussian graphical models, structural-zero samples drawn
// from them, and the estimator comparison experiment.
//
// Omega has `off_diag_value` on every adjacent pair and a diagonal of
// 1 + 1.05 * (absolute off-diagonal row sum), which is strictly diagonally
// dominant. It is then rescaled as D^1/2 Omega D^1/2 with D = diag(Omega^-1),
// making Sigma = Omega^-1 a correlation matrix.

#ifndef SZCOV_SIMGEN_HPP
#define SZCOV_SIMGEN_HPP

#include "szcov/tuning.hpp"

#include <string_view>

namespace szcov {

enum class GraphKind { band, cluster };

std::string_view to_string(GraphKind k);
GraphKind parse_graph_kind(std::string_view s);

/// max(1, round-half-up(d / 20)).
int default_groups(Index d);

struct GraphModelSpec {
  GraphKind kind = GraphKind::band;
  Index d = 0;
  int groups = 0;  // bandwidth or cluster count; 0 selects default_groups(d)
  double off_diag_value = 0.5;

  int resolved_groups() const { return groups > 0 ? groups : default_groups(d); }
};

struct GraphModel {
  MatrixXd omega;
  MatrixXd sigma;        // Omega^-1, unit diagonal
  MaskMatrix adjacency;  // includes the diagonal
  int groups = 0;
};

/// Band: |i - j| <= groups. Cluster: `groups` contiguous blocks whose sizes
/// differ by at most one, larger blocks first.
MaskMatrix graph_adjacency(GraphKind kind, Index d, int groups);

/// Throws InputError for invalid specs or a result that is not positive definite.
GraphModel gen_precision(const GraphModelSpec& spec);

/// Draws each full row from N(mu, sigma) and hides the masked coordinates.
/// Throws InputError if sigma is not positive definite.
MaskedDataset sample_dataset(const VectorXd& mu, const MatrixXd& sigma,
                             const ObservationMask& mask, Seed seed);

enum class EstimatorId { renorm_soft, renorm_hard, naive_soft, naive_hard, renorm_clime, naive_clime };

std::string_view to_string(EstimatorId e);
EstimatorId parse_estimator_id(std::string_view s);
std::vector<EstimatorId> all_estimators();

struct ExperimentGrid {
  std::vector<Index> n_values;
  std::vector<Index> d_values;
  int replicates = 1;
  std::vector<EstimatorId> estimators = all_estimators();
  double rho_low = 0.0, rho_high = 0.75;  // per-component missingness range
  int cv_folds = 5;
  Seed seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct ExperimentRow {
  GraphKind kind;
  EstimatorId estimator;
  Index n = 0, d = 0;
  int rep = 0;
  Seed seed = 0;
  double spectral_error = 0.0;
  double penalty = 0.0;

  double n_over_logd() const { return static_cast<double>(n) / std::log(static_cast<double>(d)); }
};

struct ExperimentFailure {
  EstimatorId estimator;
  Index n = 0, d = 0;
  int rep = 0;
  std::string message;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;  // ordered by (n, d, rep, estimator)
  std::vector<ExperimentFailure> failures;
};

/// Replicate seed for cell (n, d, rep) under the grid seed.
Seed replicate_seed(Seed base, Index n, Index d, int rep);

/// Spectral errors of the requested estimators against the true Sigma
/// (thresholding) or Omega (precision), with cross-validated penalties.
/// Failures of single fits are recorded and skipped.
ExperimentTable run_experiment(const ExperimentGrid& grid, const GraphModelSpec& model);

}  // namespace szcov

#endif  // SZCOV_SIMGEN_HPP
