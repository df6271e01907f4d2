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

#include "szcov/simgen.hpp"

#include "szcov/clime.hpp"
#include "szcov/metrics.hpp"

#include <map>

namespace szcov {

std::string_view to_string(GraphKind k) { return k == GraphKind::band ? "band" : "cluster"; }

GraphKind parse_graph_kind(std::string_view s) {
  if (s == "band") return GraphKind::band;
  if (s == "cluster") return GraphKind::cluster;
  throw InputError("unknown graph kind '" + std::string(s) + "'");
}

int default_groups(Index d) {
  // round-half-up of d / 20 in integer arithmetic
  return std::max<int>(1, static_cast<int>((d + 10) / 20));
}

MaskMatrix graph_adjacency(GraphKind kind, Index d, int groups) {
  if (d < 1) throw InputError("graph dimension must be >= 1");
  if (groups < 1) throw InputError("groups must be >= 1");
  MaskMatrix adj = MaskMatrix::Zero(d, d);
  if (kind == GraphKind::band) {
    for (Index i = 0; i < d; ++i)
      for (Index j = std::max<Index>(0, i - groups); j <= std::min<Index>(d - 1, i + groups); ++j)
        adj(i, j) = 1;
    return adj;
  }
  if (groups > d) throw InputError("cluster count exceeds dimension");
  const Index base = d / groups, extra = d % groups;
  Index start = 0;
  for (Index g = 0; g < groups; ++g) {
    const Index size = base + (g < extra ? 1 : 0);
    adj.block(start, start, size, size).setOnes();
    start += size;
  }
  return adj;
}

GraphModel gen_precision(const GraphModelSpec& spec) {
  if (spec.d < 2) throw InputError("graph dimension must be >= 2");
  if (!std::isfinite(spec.off_diag_value)) throw InputError("coupling must be finite");
  GraphModel out;
  out.groups = spec.resolved_groups();
  out.adjacency = graph_adjacency(spec.kind, spec.d, out.groups);

  const Index d = spec.d;
  MatrixXd omega = out.adjacency.cast<double>() * spec.off_diag_value;
  omega.diagonal().setZero();
  const VectorXd row_sum = omega.cwiseAbs().rowwise().sum();
  omega.diagonal() = (1.0 + 1.05 * row_sum.array()).matrix();

  Eigen::LLT<MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) throw InputError("precision matrix is not positive definite");
  const VectorXd scale = llt.solve(MatrixXd::Identity(d, d)).diagonal().cwiseSqrt();
  omega = scale.asDiagonal() * omega * scale.asDiagonal();
  omega = (0.5 * (omega + omega.transpose())).eval();

  Eigen::LLT<MatrixXd> llt2(omega);
  if (llt2.info() != Eigen::Success || !(min_eigenvalue(omega) > 0.0))
    throw InputError("precision matrix is not positive definite");
  MatrixXd sigma = llt2.solve(MatrixXd::Identity(d, d));
  sigma = (0.5 * (sigma + sigma.transpose())).eval();
  out.omega = std::move(omega);
  out.sigma = std::move(sigma);
  return out;
}

MaskedDataset sample_dataset(const VectorXd& mu, const MatrixXd& sigma,
                             const ObservationMask& mask, Seed seed) {
  const Index d = sigma.rows();
  if (sigma.cols() != d || mu.size() != d || mask.cols() != d)
    throw InputError("mean, covariance and mask dimensions differ");
  Eigen::LLT<MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw InputError("covariance is not positive definite");
  const MatrixXd l = llt.matrixL();
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  MatrixXd draws(d, mask.rows());
  for (Index i = 0; i < mask.rows(); ++i)
    for (Index j = 0; j < d; ++j) draws(j, i) = z(rng);
  MatrixXd x = (l * draws).colwise() + mu;
  return MaskedDataset(x.transpose(), mask);
}

std::string_view to_string(EstimatorId e) {
  switch (e) {
    case EstimatorId::renorm_soft: return "renorm_soft";
    case EstimatorId::renorm_hard: return "renorm_hard";
    case EstimatorId::naive_soft: return "naive_soft";
    case EstimatorId::naive_hard: return "naive_hard";
    case EstimatorId::renorm_clime: return "renorm_clime";
    case EstimatorId::naive_clime: return "naive_clime";
  }
  return "";
}

std::vector<EstimatorId> all_estimators() {
  return {EstimatorId::renorm_soft, EstimatorId::renorm_hard, EstimatorId::naive_soft,
          EstimatorId::naive_hard, EstimatorId::renorm_clime, EstimatorId::naive_clime};
}

EstimatorId parse_estimator_id(std::string_view s) {
  for (auto e : all_estimators())
    if (to_string(e) == s) return e;
  throw InputError("unknown estimator '" + std::string(s) + "'");
}

void ExperimentGrid::validate() const {
  if (n_values.empty() || d_values.empty()) throw InputError("experiment grid is empty");
  for (Index n : n_values)
    if (n < 2) throw InputError("sample sizes must be >= 2");
  for (Index d : d_values)
    if (d < 2) throw InputError("dimensions must be >= 2");
  if (replicates < 1) throw InputError("replicates must be >= 1");
  if (estimators.empty()) throw InputError("no estimators requested");
  if (cv_folds < 2) throw InputError("cross-validation needs at least 2 folds");
}

Seed replicate_seed(Seed base, Index n, Index d, int rep) {
  return derive_seed(base, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d),
                            static_cast<std::uint64_t>(rep)});
}

namespace {

bool is_precision(EstimatorId e) {
  return e == EstimatorId::renorm_clime || e == EstimatorId::naive_clime;
}

CovarianceBase base_of(EstimatorId e) {
  switch (e) {
    case EstimatorId::renorm_soft:
    case EstimatorId::renorm_hard:
    case EstimatorId::renorm_clime: return CovarianceBase::renormalized;
    default: return CovarianceBase::naive;
  }
}

ThresholdKind kind_of(EstimatorId e) {
  return e == EstimatorId::renorm_hard || e == EstimatorId::naive_hard ? ThresholdKind::hard
                                                                       : ThresholdKind::soft;
}

struct Cell {
  Index n, d;
  int rep;
};

}  // namespace

ExperimentTable run_experiment(const ExperimentGrid& grid, const GraphModelSpec& model) {
  grid.validate();
  std::map<Index, GraphModel> models;
  for (Index d : grid.d_values) {
    auto spec = model;
    spec.d = d;
    models.emplace(d, gen_precision(spec));
  }

  std::vector<Cell> cells;
  for (Index n : grid.n_values)
    for (Index d : grid.d_values)
      for (int r = 0; r < grid.replicates; ++r) cells.push_back({n, d, r});

  std::vector<ExperimentTable> parts(cells.size());
  parallel_for(cells.size(), grid.threads, [&](std::size_t c) {
    const auto [n, d, rep] = cells[c];
    const GraphModel& truth = models.at(d);
    const Seed seed = replicate_seed(grid.seed, n, d, rep);
    auto& part = parts[c];
    try {
      const auto rho = sample_rho(d, grid.rho_low, grid.rho_high, derive_seed(seed, {1}));
      const auto mask = generate_mask(n, d, rho, derive_seed(seed, {2}));
      const auto data = sample_dataset(VectorXd::Zero(d), truth.sigma, mask, derive_seed(seed, {3}));
      CvConfig cv;
      cv.folds = grid.cv_folds;
      cv.seed = derive_seed(seed, {4});

      std::map<CovarianceBase, MatrixXd> sigma_hat;
      for (EstimatorId e : grid.estimators) {
        try {
          const auto base = base_of(e);
          if (!sigma_hat.count(base)) sigma_hat.emplace(base, base_covariance(data, base).sigma);
          const MatrixXd& s = sigma_hat.at(base);
          ExperimentRow row{model.kind, e, n, d, rep, seed, 0.0, 0.0};
          if (is_precision(e)) {
            const auto tuned = cv_precision(data, cv, base);
            const auto est = estimate_precision(s, tuned.selected);
            row.penalty = tuned.selected;
            row.spectral_error = spectral_norm(est.omega - truth.omega);
          } else {
            const auto tuned = cv_covariance(data, kind_of(e), cv, base);
            row.penalty = tuned.selected;
            row.spectral_error =
                spectral_norm(apply_threshold(s, ThresholdOperator(kind_of(e), tuned.selected)) -
                              truth.sigma);
          }
          part.rows.push_back(row);
        } catch (const std::exception& ex) {
          part.failures.push_back({e, n, d, rep, ex.what()});
        }
      }
    } catch (const std::exception& ex) {
      for (EstimatorId e : grid.estimators) part.failures.push_back({e, n, d, rep, ex.what()});
    }
  });

  ExperimentTable out;
  for (auto& p : parts) {
    out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
    out.failures.insert(out.failures.end(), p.failures.begin(), p.failures.end());
  }
  return out;
}

}  // namespace szcov
