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

#include "szcov/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace szcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DualSimplex::DualSimplex(MatrixXd a, VectorXd c, std::vector<Index> initial_basis,
                         LpOptions options)
    : a_(std::move(a)), c_(std::move(c)), options_(options),
      basis_(std::move(initial_basis)) {
  const Index m = a_.rows(), n = a_.cols();
  if (c_.size() != n) throw InputError("cost vector length differs from column count");
  if (static_cast<Index>(basis_.size()) != m)
    throw InputError("initial basis must name one column per row");
  state_.assign(static_cast<std::size_t>(n), State::at_lower);
  for (Index col : basis_) {
    if (col < 0 || col >= n) throw InputError("initial basis column out of range");
    if (state_[static_cast<std::size_t>(col)] == State::basic)
      throw InputError("initial basis repeats a column");
    state_[static_cast<std::size_t>(col)] = State::basic;
  }
  if (options_.max_iterations <= 0)
    options_.max_iterations = static_cast<int>(50 * (m + n));
  x_ = VectorXd::Zero(n);
  refactor();
  if (!basis_inverse_.allFinite()) throw InputError("initial basis is singular");
}

void DualSimplex::refactor() {
  const Index m = a_.rows();
  MatrixXd basis_matrix(m, m);
  VectorXd basic_costs(m);
  for (Index k = 0; k < m; ++k) {
    const Index col = basis_[static_cast<std::size_t>(k)];
    basis_matrix.col(k) = a_.col(col);
    basic_costs[k] = c_[col];
  }
  Eigen::PartialPivLU<MatrixXd> lu(basis_matrix);
  basis_inverse_ = lu.inverse();
  const VectorXd prices = basis_inverse_.transpose() * basic_costs;
  reduced_ = c_ - a_.transpose() * prices;
  for (Index col : basis_) reduced_[col] = 0.0;
  if (b_.size() == m) compute_basic_values();
  pivots_since_refactor_ = 0;
}

void DualSimplex::place_nonbasic() {
  const double tol = options_.dual_tol;
  for (Index j = 0; j < a_.cols(); ++j) {
    auto& s = state_[static_cast<std::size_t>(j)];
    if (s == State::basic) continue;
    const bool lo = std::isfinite(lower_[j]), hi = std::isfinite(upper_[j]);
    const double dj = reduced_[j];
    if (lo && hi) {
      s = dj >= 0.0 ? State::at_lower : State::at_upper;
    } else if (lo) {
      if (dj < -tol) throw InputError("basis is not dual feasible for the given bounds");
      s = State::at_lower;
    } else if (hi) {
      if (dj > tol) throw InputError("basis is not dual feasible for the given bounds");
      s = State::at_upper;
    } else {
      if (std::abs(dj) > tol) throw InputError("basis is not dual feasible for the given bounds");
      s = State::free_zero;
    }
    x_[j] = s == State::at_lower ? lower_[j] : s == State::at_upper ? upper_[j] : 0.0;
  }
}

void DualSimplex::compute_basic_values() {
  VectorXd rhs = b_;
  for (Index j = 0; j < a_.cols(); ++j)
    if (state_[static_cast<std::size_t>(j)] != State::basic && x_[j] != 0.0)
      rhs.noalias() -= a_.col(j) * x_[j];
  const VectorXd xb = basis_inverse_ * rhs;
  for (Index k = 0; k < a_.rows(); ++k) x_[basis_[static_cast<std::size_t>(k)]] = xb[k];
}

Index DualSimplex::choose_leaving_row(bool bland, double* target) const {
  Index best = -1;
  double best_score = 0.0;
  VectorXd weights;
  if (!bland) weights = basis_inverse_.rowwise().squaredNorm();
  for (Index k = 0; k < a_.rows(); ++k) {
    const Index col = basis_[static_cast<std::size_t>(k)];
    const double v = x_[col];
    double gap = 0.0, bound = 0.0;
    if (v < lower_[col] - options_.primal_tol) {
      gap = lower_[col] - v;
      bound = lower_[col];
    } else if (v > upper_[col] + options_.primal_tol) {
      gap = v - upper_[col];
      bound = upper_[col];
    } else {
      continue;
    }
    if (bland) {
      if (best < 0 || col < basis_[static_cast<std::size_t>(best)]) {
        best = k;
        *target = bound;
      }
      continue;
    }
    // Dual steepest edge: infeasibility scaled by the row norm of B^-1.
    const double score = gap * gap / weights[k];
    if (score > best_score) {
      best_score = score;
      best = k;
      *target = bound;
    }
  }
  return best;
}

Index DualSimplex::choose_entering_col(const Eigen::RowVectorXd& alpha, bool increase,
                                       bool bland, double gap,
                                       std::vector<Index>* flips) const {
  const double ptol = options_.pivot_tol;
  auto eligible = [&](Index j) {
    const State s = state_[static_cast<std::size_t>(j)];
    const double a = alpha[j];
    switch (s) {
      case State::basic: return false;
      case State::free_zero: return std::abs(a) > ptol;
      case State::at_lower: return increase ? a < -ptol : a > ptol;
      case State::at_upper: return increase ? a > ptol : a < -ptol;
    }
    return false;
  };
  const Index n = a_.cols();
  if (bland) {
    Index best = -1;
    double best_ratio = kInf;
    for (Index j = 0; j < n; ++j) {
      if (!eligible(j)) continue;
      const double ratio = std::abs(reduced_[j]) / std::abs(alpha[j]);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = j;
      }
    }
    return best;
  }

  struct Breakpoint {
    double ratio;
    Index col;
  };
  std::vector<Breakpoint> points;
  for (Index j = 0; j < n; ++j)
    if (eligible(j)) points.push_back({std::abs(reduced_[j]) / std::abs(alpha[j]), j});
  if (points.empty()) return -1;
  std::sort(points.begin(), points.end(), [](const Breakpoint& p, const Breakpoint& q) {
    return p.ratio < q.ratio || (p.ratio == q.ratio && p.col < q.col);
  });

  // Long-step test: pass boxed breakpoints while the dual slope stays positive;
  // every variable passed moves to its opposite bound.
  std::size_t stop = 0;
  double slope = gap;
  for (; stop + 1 < points.size(); ++stop) {
    const Index j = points[stop].col;
    const double width = upper_[j] - lower_[j];
    if (!std::isfinite(width)) break;
    const double next = slope - std::abs(alpha[j]) * width;
    if (next <= 0.0) break;
    slope = next;
  }

  // Harris pass over the remaining breakpoints: the largest pivot within the
  // relaxed bound of the stopping point.
  double bound = kInf;
  for (std::size_t k = stop; k < points.size(); ++k) {
    const Index j = points[k].col;
    bound = std::min(bound, (std::abs(reduced_[j]) + options_.dual_tol) / std::abs(alpha[j]));
  }
  Index best = -1;
  double best_pivot = 0.0;
  for (std::size_t k = stop; k < points.size() && points[k].ratio <= bound; ++k) {
    const double mag = std::abs(alpha[points[k].col]);
    if (mag > best_pivot) {
      best_pivot = mag;
      best = points[k].col;
    }
  }
  flips->clear();
  for (std::size_t k = 0; k < stop; ++k) flips->push_back(points[k].col);
  return best;
}

LpResult DualSimplex::solve(const VectorXd& b, const VectorXd& lower, const VectorXd& upper) {
  const Index m = a_.rows(), n = a_.cols();
  if (b.size() != m) throw InputError("right-hand side length differs from row count");
  if (lower.size() != n || upper.size() != n)
    throw InputError("bound vectors must have one entry per column");
  for (Index j = 0; j < n; ++j)
    if (!(lower[j] <= upper[j])) throw InputError("lower bound exceeds upper bound");
  b_ = b;
  lower_ = lower;
  upper_ = upper;
  place_nonbasic();
  compute_basic_values();

  LpResult result;
  const int bland_after = options_.max_iterations / 2;
  bool refactored_on_failure = false;
  std::vector<Index> flips;
  for (;;) {
    if (result.iterations >= options_.max_iterations) {
      result.status = LpStatus::iteration_limit;
      break;
    }
    const bool bland = result.iterations >= bland_after;
    double target = 0.0;
    const Index row = choose_leaving_row(bland, &target);
    if (row < 0) {
      result.status = LpStatus::optimal;
      break;
    }
    const Index leaving = basis_[static_cast<std::size_t>(row)];
    const bool increase = x_[leaving] < target;
    const Eigen::RowVectorXd alpha = basis_inverse_.row(row) * a_;
    const Index col = choose_entering_col(alpha, increase, bland,
                                          std::abs(x_[leaving] - target), &flips);
    if (col < 0) {
      // Confirm against a fresh factorization before declaring infeasibility.
      if (!refactored_on_failure) {
        refactored_on_failure = true;
        refactor();
        continue;
      }
      result.status = LpStatus::infeasible;
      break;
    }

    if (!bland && !flips.empty()) {
      VectorXd shift = VectorXd::Zero(m);
      for (Index j : flips) {
        auto& s = state_[static_cast<std::size_t>(j)];
        const double to = s == State::at_lower ? upper_[j] : lower_[j];
        shift.noalias() += a_.col(j) * (to - x_[j]);
        x_[j] = to;
        s = s == State::at_lower ? State::at_upper : State::at_lower;
      }
      const VectorXd dxb = basis_inverse_ * shift;
      for (Index k = 0; k < m; ++k) x_[basis_[static_cast<std::size_t>(k)]] -= dxb[k];
    }

    const VectorXd gamma = basis_inverse_ * a_.col(col);
    const double pivot = gamma[row];
    const double theta = reduced_[col] / alpha[col];
    reduced_.noalias() -= theta * alpha.transpose();
    for (Index k : basis_) reduced_[k] = 0.0;
    reduced_[leaving] = -theta;
    reduced_[col] = 0.0;

    const double step = (x_[leaving] - target) / pivot;
    for (Index k = 0; k < m; ++k) x_[basis_[static_cast<std::size_t>(k)]] -= step * gamma[k];
    x_[leaving] = target;
    x_[col] += step;

    const Eigen::RowVectorXd pivot_row = basis_inverse_.row(row) / pivot;
    VectorXd factors = gamma;
    factors[row] = 0.0;
    basis_inverse_.noalias() -= factors * pivot_row;
    basis_inverse_.row(row) = pivot_row;

    state_[static_cast<std::size_t>(leaving)] = increase ? State::at_lower : State::at_upper;
    state_[static_cast<std::size_t>(col)] = State::basic;
    basis_[static_cast<std::size_t>(row)] = col;
    ++result.iterations;
    if (++pivots_since_refactor_ >= options_.refactor_interval) refactor();
  }

  result.x = x_;
  result.objective = c_.dot(x_);
  return result;
}

}  // namespace szcov
