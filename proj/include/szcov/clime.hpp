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

// Constrained l1 precision estimation:
//
//     minimize ||Omega||_1  subject to  ||Sigma Omega - I||_inf <= lambda,
//
// decomposed into d column programs min ||b||_1 s.t. ||Sigma b - e_j||_inf <=
// lambda. Each column is a linear program in (u, v) >= 0 with b = u - v and
// ranged residuals r = Sigma b - e_j in [-lambda, lambda], so Sigma does not
// need to be positive semidefinite.

#ifndef SZCOV_CLIME_HPP
#define SZCOV_CLIME_HPP

#include "szcov/covariance.hpp"
#include "szcov/lp.hpp"

#include <memory>
#include <optional>

namespace szcov {

/// Both feasibility and the per-solve residual check use this slack.
inline constexpr double kFeasibilityTol = 1e-8;

struct ColumnProgram {
  Eigen::Ref<const MatrixXd> sigma;
  Index target;
  double lambda;
};

struct ColumnSolution {
  VectorXd beta;
  double residual = 0.0;  // ||Sigma beta - e_j||_inf
  int iterations = 0;
  bool feasible = false;
};

/// min_b ||Sigma b - e_j||_inf, the smallest lambda for which column j is feasible.
double min_column_residual(const Eigen::Ref<const MatrixXd>& sigma, Index target);

/// Warm-started solver for one column across a sequence of lambda values.
class ColumnPathSolver {
 public:
  ColumnPathSolver(const Eigen::Ref<const MatrixXd>& sigma, Index target);
  ~ColumnPathSolver();
  ColumnPathSolver(ColumnPathSolver&&) noexcept;
  ColumnPathSolver& operator=(ColumnPathSolver&&) noexcept;

  /// Returns feasible == false when the program has no solution at lambda.
  ColumnSolution solve(double lambda);

 private:
  MatrixXd sigma_;
  Index target_;
  std::unique_ptr<DualSimplex> lp_;
};

/// Throws InfeasibleError (carrying the minimal achievable residual) when no
/// b satisfies the constraint.
ColumnSolution solve_column(const ColumnProgram& prog);

/// Keeps, for each pair, whichever mirror entry has the smaller magnitude.
/// Ties keep the upper-triangle entry.
template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& omega1) {
  if (omega1.rows() != omega1.cols()) throw InputError("symmetrize needs a square matrix");
  MatrixX<typename Derived::Scalar> out(omega1.rows(), omega1.cols());
  for (Index i = 0; i < omega1.rows(); ++i) {
    out(i, i) = omega1(i, i);
    for (Index j = i + 1; j < omega1.cols(); ++j) {
      const auto upper = omega1(i, j), lower = omega1(j, i);
      const auto v = std::abs(upper) <= std::abs(lower) ? upper : lower;
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

struct PrecisionEstimate {
  MatrixXd omega;           // symmetrized
  MatrixXd unsymmetrized;   // column solutions before symmetrization
  double lambda = 0.0;
  double feasibility_gap = 0.0;  // ||Sigma Omega_1 - I||_inf
  std::vector<int> column_iterations;
};

PrecisionEstimate estimate_precision(const Eigen::Ref<const MatrixXd>& sigma, double lambda,
                                     unsigned threads = 1);

inline PrecisionEstimate estimate_precision(const CovarianceEstimate& est, double lambda,
                                            unsigned threads = 1) {
  return estimate_precision(est.sigma, lambda, threads);
}

/// Estimates for every lambda, warm-starting each column along the path.
/// Entries are empty where some column program is infeasible.
std::vector<std::optional<PrecisionEstimate>> estimate_precision_path(
    const Eigen::Ref<const MatrixXd>& sigma, const std::vector<double>& lambdas,
    unsigned threads = 1);

}  // namespace szcov

#endif  // SZCOV_CLIME_HPP
