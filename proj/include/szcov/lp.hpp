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

// Dense revised dual simplex for small bounded linear programs
//
//     minimize c^T x  subject to  A x = b,  lower <= x <= upper.
//
// The caller supplies a starting basis that is dual feasible (every nonbasic
// reduced cost has a sign matching some finite bound). A and c are fixed per
// solver; b and the bounds may change between solve() calls, and each call
// starts from the previous optimal basis. That is what makes penalty paths
// cheap: moving a bound keeps the basis dual feasible.

#ifndef SZCOV_LP_HPP
#define SZCOV_LP_HPP

#include "szcov/common.hpp"

namespace szcov {

enum class LpStatus { optimal, infeasible, iteration_limit };

struct LpOptions {
  double primal_tol = 1e-9;   // bound violations up to this are accepted
  double dual_tol = 1e-9;     // Harris tolerance in the ratio test
  double pivot_tol = 1e-10;   // smallest usable pivot magnitude
  int max_iterations = 0;     // 0: 20 * (rows + cols)
  int refactor_interval = 100;
};

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

class DualSimplex {
 public:
  /// Throws InputError if `initial_basis` is singular or not dual feasible
  /// for the bounds of the first solve.
  DualSimplex(MatrixXd a, VectorXd c, std::vector<Index> initial_basis,
              LpOptions options = {});

  LpResult solve(const VectorXd& b, const VectorXd& lower, const VectorXd& upper);

  /// Recomputes B^-1, basic values and reduced costs from the original data.
  void refactor();

  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }
  const std::vector<Index>& basis() const { return basis_; }

 private:
  enum class State : std::uint8_t { basic, at_lower, at_upper, free_zero };

  void place_nonbasic();
  void compute_basic_values();
  Index choose_leaving_row(bool bland, double* target) const;
  Index choose_entering_col(const Eigen::RowVectorXd& alpha, bool increase,
                            bool bland, double gap, std::vector<Index>* flips) const;

  MatrixXd a_;
  VectorXd c_;
  LpOptions options_;

  VectorXd b_, lower_, upper_;
  MatrixXd basis_inverse_;
  VectorXd x_;
  VectorXd reduced_;
  std::vector<Index> basis_;
  std::vector<State> state_;
  int pivots_since_refactor_ = 0;
};

}  // namespace szcov

#endif  // SZCOV_LP_HPP
