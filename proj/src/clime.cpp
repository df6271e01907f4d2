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

#include "szcov/clime.hpp"
#include "szcov/metrics.hpp"

#include <limits>
#include <numeric>

namespace szcov {

namespace {

void check_square(const Eigen::Ref<const MatrixXd>& sigma, Index target) {
  if (sigma.rows() != sigma.cols()) throw InputError("covariance must be square");
  if (target < 0 || target >= sigma.rows()) throw InputError("column index out of range");
  if (!sigma.allFinite()) throw InputError("covariance has non-finite entries");
}

// Columns (u, v, r) of S u - S v - r = e_j.
MatrixXd column_constraints(const Eigen::Ref<const MatrixXd>& sigma) {
  const Index d = sigma.rows();
  MatrixXd a(d, 3 * d);
  a.leftCols(d) = sigma;
  a.middleCols(d, d) = -sigma;
  a.rightCols(d) = -MatrixXd::Identity(d, d);
  return a;
}

std::vector<Index> column_range(Index first, Index count) {
  std::vector<Index> out(static_cast<std::size_t>(count));
  std::iota(out.begin(), out.end(), first);
  return out;
}

double residual_of(const MatrixXd& sigma, const VectorXd& beta, Index target) {
  VectorXd r = sigma * beta;
  r[target] -= 1.0;
  return r.cwiseAbs().maxCoeff();
}

}  // namespace

double min_column_residual(const Eigen::Ref<const MatrixXd>& sigma, Index target) {
  check_square(sigma, target);
  const Index d = sigma.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // minimize t  s.t.  S(u - v) - r = e_j,  r - t + p = 0,  -r - t + q = 0,
  // over columns (u, v, r, t, p, q) with r free and the rest nonnegative.
  const Index n = 5 * d + 1;
  MatrixXd a = MatrixXd::Zero(3 * d, n);
  a.topLeftCorner(d, 3 * d) = column_constraints(sigma);
  const MatrixXd eye = MatrixXd::Identity(d, d);
  a.block(d, 2 * d, d, d) = eye;
  a.block(2 * d, 2 * d, d, d) = -eye;
  a.block(d, 3 * d, 2 * d, 1).setConstant(-1.0);
  a.block(d, 3 * d + 1, d, d) = eye;
  a.block(2 * d, 4 * d + 1, d, d) = eye;
  VectorXd c = VectorXd::Zero(n);
  c[3 * d] = 1.0;
  std::vector<Index> basis = column_range(2 * d, d);
  const auto slacks = column_range(3 * d + 1, 2 * d);
  basis.insert(basis.end(), slacks.begin(), slacks.end());
  VectorXd lower = VectorXd::Zero(n), upper = VectorXd::Constant(n, inf);
  lower.segment(2 * d, d).setConstant(-inf);
  VectorXd b = VectorXd::Zero(3 * d);
  b[target] = 1.0;
  DualSimplex lp(std::move(a), std::move(c), std::move(basis));
  const auto res = lp.solve(b, lower, upper);
  if (res.status != LpStatus::optimal)
    throw NumericalError("minimal residual program did not converge");
  const VectorXd beta = res.x.head(d) - res.x.segment(d, d);
  return residual_of(MatrixXd(sigma), beta, target);
}

ColumnPathSolver::ColumnPathSolver(const Eigen::Ref<const MatrixXd>& sigma, Index target)
    : sigma_(sigma), target_(target) {
  check_square(sigma, target);
  const Index d = sigma_.rows();
  VectorXd c = VectorXd::Zero(3 * d);
  c.head(2 * d).setOnes();
  lp_ = std::make_unique<DualSimplex>(column_constraints(sigma_), std::move(c),
                                      column_range(2 * d, d));
}

ColumnPathSolver::~ColumnPathSolver() = default;
ColumnPathSolver::ColumnPathSolver(ColumnPathSolver&&) noexcept = default;
ColumnPathSolver& ColumnPathSolver::operator=(ColumnPathSolver&&) noexcept = default;

ColumnSolution ColumnPathSolver::solve(double lambda) {
  if (!(lambda >= 0.0)) throw InputError("lambda_omega must be >= 0");
  const Index d = sigma_.rows();
  const VectorXd b = VectorXd::Unit(d, target_);
  VectorXd lower = VectorXd::Zero(3 * d);
  VectorXd upper = VectorXd::Constant(3 * d, std::numeric_limits<double>::infinity());
  lower.tail(d).setConstant(-lambda);
  upper.tail(d).setConstant(lambda);

  ColumnSolution out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto res = lp_->solve(b, lower, upper);
    out.iterations += res.iterations;
    if (res.status == LpStatus::iteration_limit)
      throw NumericalError("column " + std::to_string(target_) + " hit the iteration limit");
    if (res.status == LpStatus::infeasible) {
      out.feasible = false;
      out.beta = VectorXd::Zero(d);
      out.residual = min_column_residual(sigma_, target_);
      if (out.residual > lambda + kFeasibilityTol) return out;
      // The certificate disagrees with the residual program: drop the basis.
      lp_->refactor();
      continue;
    }
    out.beta = res.x.head(d) - res.x.segment(d, d);
    out.residual = residual_of(sigma_, out.beta, target_);
    out.feasible = true;
    if (out.residual <= lambda + kFeasibilityTol) return out;
    lp_->refactor();
  }
  if (!out.feasible) return out;
  throw NumericalError("column " + std::to_string(target_) +
                       " solution violates its constraint by " +
                       std::to_string(out.residual - lambda));
}

ColumnSolution solve_column(const ColumnProgram& prog) {
  ColumnPathSolver solver(prog.sigma, prog.target);
  auto sol = solver.solve(prog.lambda);
  if (!sol.feasible)
    throw InfeasibleError("column " + std::to_string(prog.target) +
                              " is infeasible; smallest achievable residual is " +
                              std::to_string(sol.residual),
                          prog.target, sol.residual);
  return sol;
}

namespace {

PrecisionEstimate assemble(const MatrixXd& sigma, MatrixXd omega1, double lambda,
                           std::vector<int> iterations) {
  PrecisionEstimate est;
  est.lambda = lambda;
  est.feasibility_gap =
      sup_norm(sigma * omega1 - MatrixXd::Identity(sigma.rows(), sigma.cols()));
  est.omega = symmetrize(omega1);
  est.unsymmetrized = std::move(omega1);
  est.column_iterations = std::move(iterations);
  return est;
}

}  // namespace

PrecisionEstimate estimate_precision(const Eigen::Ref<const MatrixXd>& sigma, double lambda,
                                     unsigned threads) {
  auto path = estimate_precision_path(sigma, {lambda}, threads);
  if (!path.front()) {
    // Report the first infeasible column with its minimal residual.
    for (Index j = 0; j < sigma.rows(); ++j) {
      const double r = min_column_residual(sigma, j);
      if (r > lambda + kFeasibilityTol)
        throw InfeasibleError("column " + std::to_string(j) +
                                  " is infeasible; smallest achievable residual is " +
                                  std::to_string(r),
                              j, r);
    }
    throw NumericalError("precision program reported infeasible without a witness column");
  }
  return std::move(*path.front());
}

std::vector<std::optional<PrecisionEstimate>> estimate_precision_path(
    const Eigen::Ref<const MatrixXd>& sigma, const std::vector<double>& lambdas,
    unsigned threads) {
  if (sigma.rows() != sigma.cols()) throw InputError("covariance must be square");
  const Index d = sigma.rows();
  const std::size_t count = lambdas.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });

  std::vector<MatrixXd> columns(count, MatrixXd::Zero(d, d));
  std::vector<std::vector<int>> iterations(count, std::vector<int>(static_cast<std::size_t>(d), 0));
  std::vector<std::vector<char>> infeasible(count, std::vector<char>(static_cast<std::size_t>(d), 0));
  const MatrixXd s = sigma;

  parallel_for(static_cast<std::size_t>(d), threads, [&](std::size_t jj) {
    const auto j = static_cast<Index>(jj);
    ColumnPathSolver solver(s, j);
    bool dead = false;
    for (std::size_t k : order) {
      if (dead) {
        infeasible[k][jj] = 1;
        continue;
      }
      auto sol = solver.solve(lambdas[k]);
      iterations[k][jj] = sol.iterations;
      if (!sol.feasible) {
        // Feasible sets shrink with lambda, so smaller values fail too.
        dead = true;
        infeasible[k][jj] = 1;
        continue;
      }
      columns[k].col(j) = sol.beta;
    }
  });

  std::vector<std::optional<PrecisionEstimate>> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    bool ok = true;
    for (char f : infeasible[k]) ok = ok && !f;
    if (ok) out[k] = assemble(s, std::move(columns[k]), lambdas[k], std::move(iterations[k]));
  }
  return out;
}

}  // namespace szcov
