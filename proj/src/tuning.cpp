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

#include "szcov/tuning.hpp"

#include "szcov/clime.hpp"
#include "szcov/metrics.hpp"

#include <numeric>

namespace szcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FoldSplit {
  MaskedDataset train, valid;
};

std::vector<FoldSplit> split_folds(const MaskedDataset& data, const CvConfig& cfg) {
  if (data.rows() < cfg.folds)
    throw InputError("cross-validation needs at least one row per fold");
  const auto fold = assign_folds(data.rows(), cfg.folds, cfg.seed);
  std::vector<FoldSplit> out;
  for (int k = 0; k < cfg.folds; ++k) {
    std::vector<Index> train, valid;
    for (Index i = 0; i < data.rows(); ++i)
      (fold[static_cast<std::size_t>(i)] == k ? valid : train).push_back(i);
    out.push_back({data.select_rows(train), data.select_rows(valid)});
  }
  return out;
}

CvResult reduce(std::vector<double> grid, const std::vector<std::vector<double>>& fold_loss) {
  CvResult out;
  out.grid = std::move(grid);
  out.mean_loss.assign(out.grid.size(), 0.0);
  for (std::size_t g = 0; g < out.grid.size(); ++g) {
    double sum = 0.0;
    for (const auto& f : fold_loss) sum += f[g];
    out.mean_loss[g] = sum / static_cast<double>(fold_loss.size());
  }
  const Index best = argmin_first(out.mean_loss);
  if (best >= 0) out.selected = out.grid[static_cast<std::size_t>(best)];
  return out;
}

}  // namespace

std::string_view to_string(CovarianceBase b) {
  return b == CovarianceBase::renormalized ? "renorm" : "naive";
}

CovarianceBase parse_covariance_base(std::string_view s) {
  if (s == "renorm" || s == "renormalized") return CovarianceBase::renormalized;
  if (s == "naive") return CovarianceBase::naive;
  throw InputError("unknown covariance base '" + std::string(s) + "'");
}

CovarianceEstimate base_covariance(const MaskedDataset& data, CovarianceBase base) {
  return base == CovarianceBase::renormalized ? renormalized_covariance(data)
                                              : naive_covariance(data);
}

std::string_view to_string(PrecisionLoss l) {
  return l == PrecisionLoss::trace_of_square ? "trace-of-square" : "square-of-trace";
}

PrecisionLoss parse_precision_loss(std::string_view s) {
  if (s == "trace-of-square") return PrecisionLoss::trace_of_square;
  if (s == "square-of-trace") return PrecisionLoss::square_of_trace;
  throw InputError("unknown precision loss '" + std::string(s) + "'");
}

void CvConfig::validate() const {
  if (folds < 2) throw InputError("cross-validation needs at least 2 folds");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] > 0.0) || !std::isfinite(grid[g]))
      throw InputError("penalty grid values must be finite and > 0");
    if (g > 0 && !(grid[g] > grid[g - 1]))
      throw InputError("penalty grid must be strictly ascending");
  }
}

std::vector<int> assign_folds(Index rows, int folds, Seed seed) {
  if (folds < 1) throw InputError("fold count must be positive");
  std::vector<Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(static_cast<std::size_t>(rows));
  for (std::size_t k = 0; k < order.size(); ++k)
    fold[static_cast<std::size_t>(order[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
  return fold;
}

std::vector<double> default_threshold_grid(const MatrixXd& sigma) {
  const double top = sup_norm(sigma);
  if (!(top > 0.0)) throw InputError("covariance estimate is identically zero");
  return log_grid(top / 1000.0, top, 50);
}

std::vector<double> default_precision_grid() { return log_grid(1e-3, 1.0, 20); }

Index argmin_first(const std::vector<double>& values) {
  Index best = -1;
  for (std::size_t g = 0; g < values.size(); ++g)
    if (values[g] < kInf && (best < 0 || values[g] < values[static_cast<std::size_t>(best)]))
      best = static_cast<Index>(g);
  return best;
}

double precision_loss(const MatrixXd& sigma_valid, const MatrixXd& omega, PrecisionLoss kind) {
  MatrixXd r = sigma_valid * omega;
  r.diagonal().array() -= 1.0;
  if (kind == PrecisionLoss::trace_of_square) return r.squaredNorm();
  const double t = r.trace();
  return t * t;
}

CvResult cv_covariance(const MaskedDataset& data, ThresholdKind kind, const CvConfig& cfg,
                       CovarianceBase base, bool exclude_diagonal) {
  cfg.validate();
  auto grid = cfg.grid.empty() ? default_threshold_grid(base_covariance(data, base).sigma)
                               : cfg.grid;
  const auto splits = split_folds(data, cfg);
  std::vector<std::vector<double>> fold_loss(splits.size());
  parallel_for(splits.size(), cfg.threads, [&](std::size_t k) {
    const MatrixXd train = base_covariance(splits[k].train, base).sigma;
    const MatrixXd valid = base_covariance(splits[k].valid, base).sigma;
    auto& loss = fold_loss[k];
    loss.reserve(grid.size());
    for (double lambda : grid)
      loss.push_back((apply_threshold(train, ThresholdOperator(kind, lambda, exclude_diagonal)) -
                      valid).norm());
  });
  return reduce(std::move(grid), fold_loss);
}

CvResult cv_precision(const MaskedDataset& data, const CvConfig& cfg, CovarianceBase base) {
  cfg.validate();
  auto grid = cfg.grid.empty() ? default_precision_grid() : cfg.grid;
  const auto splits = split_folds(data, cfg);
  std::vector<std::vector<double>> fold_loss(splits.size());
  parallel_for(splits.size(), cfg.threads, [&](std::size_t k) {
    const MatrixXd train = base_covariance(splits[k].train, base).sigma;
    const MatrixXd valid = base_covariance(splits[k].valid, base).sigma;
    const auto path = estimate_precision_path(train, grid);
    auto& loss = fold_loss[k];
    for (const auto& est : path)
      loss.push_back(est ? precision_loss(valid, est->omega, cfg.precision_loss) : kInf);
  });
  auto out = reduce(std::move(grid), fold_loss);
  if (argmin_first(out.mean_loss) < 0)
    throw InfeasibleError("every precision penalty on the grid is infeasible in some fold", -1,
                          kInf);
  return out;
}

}  // namespace szcov
