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

#include "szcov/classify.hpp"

#include "szcov/clime.hpp"

#include <Eigen/LU>

#include <numeric>

namespace szcov {

namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kFirstRidge = 1e-8;
constexpr double kLastRidge = 1e12;

void check_labels(const MaskedDataset& data, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != data.rows())
    throw InputError("label count differs from row count");
  bool one = false, two = false;
  for (int l : labels) {
    if (l != 1 && l != 2) throw InputError("class labels must be 1 or 2");
    one = one || l == 1;
    two = two || l == 2;
  }
  if (!one || !two) throw InputError("both classes must be present");
}

std::vector<Index> rows_of(const std::vector<int>& labels, int cls) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == cls) out.push_back(static_cast<Index>(i));
  return out;
}

// 1 / (|m|_1 |m^-1|_1), or 0 when the factorization hit a zero pivot. Eigen's
// rcond() estimate reports 1 for exactly singular input, so it is not used.
double reciprocal_condition(const MatrixXd& m, const Eigen::PartialPivLU<MatrixXd>& lu) {
  if ((lu.matrixLU().diagonal().array() == 0.0).any()) return 0.0;
  const MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) return 0.0;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
  return norm > 0.0 && inv_norm > 0.0 ? 1.0 / (norm * inv_norm) : 0.0;
}

// LU of m + ridge * I, escalating ridge by 10 from kFirstRidge until the
// reciprocal condition number reaches kMinRcond.
Eigen::PartialPivLU<MatrixXd> regularized_lu(const MatrixXd& m, double* ridge) {
  Eigen::PartialPivLU<MatrixXd> lu(m);
  *ridge = 0.0;
  if (reciprocal_condition(m, lu) >= kMinRcond) return lu;
  const MatrixXd eye = MatrixXd::Identity(m.rows(), m.cols());
  for (double eps = kFirstRidge; eps <= kLastRidge; eps *= 10.0) {
    const MatrixXd shifted = m + eps * eye;
    lu.compute(shifted);
    if (reciprocal_condition(shifted, lu) >= kMinRcond) {
      *ridge = eps;
      return lu;
    }
  }
  throw NumericalError("matrix stays singular under ridge regularization");
}

}  // namespace

std::string_view to_string(LdaEstimator e) {
  switch (e) {
    case LdaEstimator::soft: return "soft";
    case LdaEstimator::hard: return "hard";
    case LdaEstimator::clime: return "clime";
  }
  return "";
}

LdaEstimator parse_lda_estimator(std::string_view s) {
  if (s == "soft") return LdaEstimator::soft;
  if (s == "hard") return LdaEstimator::hard;
  if (s == "clime") return LdaEstimator::clime;
  throw InputError("unknown estimator '" + std::string(s) + "'");
}

VectorXd t_statistics(const MaskedDataset& data, const std::vector<int>& labels, bool pooled) {
  check_labels(data, labels);
  VectorXd t = VectorXd::Zero(data.cols());
  for (Index j = 0; j < data.cols(); ++j) {
    double sum[2] = {0, 0}, sq[2] = {0, 0};
    double cnt[2] = {0, 0};
    for (Index i = 0; i < data.rows(); ++i) {
      if (!data.observed(i, j)) continue;
      const int c = labels[static_cast<std::size_t>(i)] - 1;
      const double v = data.values()(i, j);
      sum[c] += v;
      cnt[c] += 1;
    }
    if (cnt[0] < 2 || cnt[1] < 2) continue;
    const double m0 = sum[0] / cnt[0], m1 = sum[1] / cnt[1];
    for (Index i = 0; i < data.rows(); ++i) {
      if (!data.observed(i, j)) continue;
      const int c = labels[static_cast<std::size_t>(i)] - 1;
      const double dev = data.values()(i, j) - (c == 0 ? m0 : m1);
      sq[c] += dev * dev;
    }
    const double v0 = sq[0] / (cnt[0] - 1), v1 = sq[1] / (cnt[1] - 1);
    double se2;
    if (pooled) {
      const double sp2 = (sq[0] + sq[1]) / (cnt[0] + cnt[1] - 2);
      se2 = sp2 * (1.0 / cnt[0] + 1.0 / cnt[1]);
    } else {
      se2 = v0 / cnt[0] + v1 / cnt[1];
    }
    // Zero spread in both classes carries no usable scale.
    if (se2 > 0.0) t[j] = (m0 - m1) / std::sqrt(se2);
  }
  return t;
}

std::vector<Index> t_select(const MaskedDataset& data, const std::vector<int>& labels, Index k,
                            bool pooled) {
  if (k < 1 || k > data.cols()) throw InputError("k must lie in [1, d]");
  const VectorXd t = t_statistics(data, labels, pooled).cwiseAbs();
  std::vector<Index> order(static_cast<std::size_t>(data.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return t[a] > t[b]; });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

DiscriminantModel fit_lda(const MaskedDataset& train, const std::vector<int>& labels,
                          LdaEstimator estimator, const CvConfig& tuning) {
  check_labels(train, labels);
  const auto rows1 = rows_of(labels, 1), rows2 = rows_of(labels, 2);
  if (rows1.size() < 2 || rows2.size() < 2)
    throw InputError("each class needs at least two training rows");

  DiscriminantModel model;
  model.estimator = estimator;
  model.mu1 = available_means(train.select_rows(rows1)).mean;
  model.mu2 = available_means(train.select_rows(rows2)).mean;

  MatrixXd centred = train.values();
  for (Index i = 0; i < train.rows(); ++i)
    centred.row(i) -= (labels[static_cast<std::size_t>(i)] == 1 ? model.mu1 : model.mu2).transpose();
  const MaskedDataset pooled(std::move(centred), train.mask(), train.names());
  const MatrixXd sigma = renormalized_covariance(pooled).sigma;

  if (estimator == LdaEstimator::clime) {
    const auto tuned = cv_precision(pooled, tuning);
    model.penalty = tuned.selected;
    const MatrixXd omega = estimate_precision(sigma, tuned.selected).omega;
    const auto lu = regularized_lu(omega, &model.ridge_used);
    const MatrixXd inv = lu.inverse();
    model.sigma = 0.5 * (inv + inv.transpose());
  } else {
    const auto kind = estimator == LdaEstimator::soft ? ThresholdKind::soft : ThresholdKind::hard;
    const auto tuned = cv_covariance(pooled, kind, tuning);
    model.penalty = tuned.selected;
    model.sigma = apply_threshold(sigma, ThresholdOperator(kind, tuned.selected));
  }
  return model;
}

Discriminant discriminant(const VectorXd& x, const std::vector<Index>& observed,
                          const DiscriminantModel& model) {
  if (observed.empty()) throw InputError("observation has no observed component");
  const Index d = model.sigma.rows();
  if (x.size() != d) throw InputError("observation length differs from model dimension");
  const auto a = static_cast<Index>(observed.size());
  MatrixXd s(a, a);
  VectorXd xa(a), m1(a), m2(a);
  for (Index p = 0; p < a; ++p) {
    const Index i = observed[static_cast<std::size_t>(p)];
    if (i < 0 || i >= d) throw InputError("observed index out of range");
    xa[p] = x[i];
    m1[p] = model.mu1[i];
    m2[p] = model.mu2[i];
    for (Index q = 0; q < a; ++q) s(p, q) = model.sigma(i, observed[static_cast<std::size_t>(q)]);
  }
  Discriminant out;
  const auto lu = regularized_lu(s, &out.ridge_used);
  const VectorXd w1 = lu.solve(m1), w2 = lu.solve(m2);
  out.delta1 = xa.dot(w1) - 0.5 * m1.dot(w1);
  out.delta2 = xa.dot(w2) - 0.5 * m2.dot(w2);
  out.label = decide(out.delta1, out.delta2);
  return out;
}

EvaluationReport evaluate(const MaskedDataset& data, const std::vector<int>& labels,
                          const EvaluationConfig& cfg) {
  check_labels(data, labels);
  if (cfg.repeats < 1) throw InputError("repeats must be >= 1");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw InputError("train fraction must lie in (0, 1)");
  if (cfg.k < 1 || cfg.k > data.cols()) throw InputError("k must lie in [1, d]");
  const std::vector<Index> by_class[2] = {rows_of(labels, 1), rows_of(labels, 2)};
  Index n_test[2];
  for (int c = 0; c < 2; ++c) {
    const auto n = static_cast<double>(by_class[c].size());
    n_test[c] = std::max<Index>(1, std::llround(n * (1.0 - cfg.train_fraction)));
    if (static_cast<Index>(by_class[c].size()) - n_test[c] < 2)
      throw InputError("class " + std::to_string(c + 1) +
                       " is too small for a split with two training rows");
  }

  EvaluationReport report;
  report.repeats = cfg.repeats;
  report.per_repeat.resize(static_cast<std::size_t>(cfg.repeats));
  parallel_for(static_cast<std::size_t>(cfg.repeats), cfg.threads, [&](std::size_t r) {
    const Seed seed = derive_seed(cfg.seed, {r});
    Rng rng(derive_seed(seed, {0}));
    std::vector<Index> train_rows, test_rows;
    for (int c = 0; c < 2; ++c) {
      auto idx = by_class[c];
      std::shuffle(idx.begin(), idx.end(), rng);
      test_rows.insert(test_rows.end(), idx.begin(), idx.begin() + n_test[c]);
      train_rows.insert(train_rows.end(), idx.begin() + n_test[c], idx.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    std::vector<int> train_labels;
    for (Index i : train_rows) train_labels.push_back(labels[static_cast<std::size_t>(i)]);
    const auto train = data.select_rows(train_rows);
    const auto selected = t_select(train, train_labels, cfg.k, cfg.pooled_t);
    std::vector<Index> kept;
    const auto train_sel = train.select_columns(selected, &kept);
    std::vector<int> kept_labels;
    for (Index i : kept) kept_labels.push_back(train_labels[static_cast<std::size_t>(i)]);

    CvConfig tuning;
    tuning.folds = cfg.cv_folds;
    tuning.seed = derive_seed(seed, {1});
    const auto model = fit_lda(train_sel, kept_labels, cfg.estimator, tuning);

    RepeatResult res;
    res.penalty = model.penalty;
    res.max_ridge = model.ridge_used;
    Index correct[2] = {0, 0};
    VectorXd x(cfg.k);
    for (Index i : test_rows) {
      const int truth = labels[static_cast<std::size_t>(i)];
      std::vector<Index> obs;
      for (Index p = 0; p < cfg.k; ++p) {
        const Index col = selected[static_cast<std::size_t>(p)];
        x[p] = data.observed(i, col) ? data.values()(i, col) : 0.0;
        if (data.observed(i, col)) obs.push_back(p);
      }
      int predicted = 2;
      if (obs.empty()) {
        ++res.unscored;
      } else {
        const auto disc = discriminant(x, obs, model);
        predicted = disc.label;
        res.max_ridge = std::max(res.max_ridge, disc.ridge_used);
      }
      if (predicted == truth) ++correct[truth - 1];
    }
    res.test1 = n_test[0];
    res.test2 = n_test[1];
    res.class1_pct = 100.0 * static_cast<double>(correct[0]) / static_cast<double>(n_test[0]);
    res.class2_pct = 100.0 * static_cast<double>(correct[1]) / static_cast<double>(n_test[1]);
    res.overall_pct = 100.0 * static_cast<double>(correct[0] + correct[1]) /
                      static_cast<double>(n_test[0] + n_test[1]);
    report.per_repeat[r] = res;
  });

  for (const auto& r : report.per_repeat) {
    report.class1_pct += r.class1_pct;
    report.class2_pct += r.class2_pct;
    report.overall_pct += r.overall_pct;
  }
  report.class1_pct /= cfg.repeats;
  report.class2_pct /= cfg.repeats;
  report.overall_pct /= cfg.repeats;
  return report;
}

}  // namespace szcov
