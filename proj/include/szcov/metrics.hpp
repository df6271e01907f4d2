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

// Matrix norms and symmetric spectral utilities.

#ifndef SZCOV_METRICS_HPP
#define SZCOV_METRICS_HPP

#include "szcov/common.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace szcov {

/// Entries with magnitude at or below this count as zero in the l0 norm.
inline constexpr double kZeroTolerance = 1e-12;

struct NormReport {
  Index l0 = 0;
  double l1 = 0.0;
  double sup = 0.0;
  double spectral = 0.0;
  double frobenius = 0.0;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double best)
      : NumericalError(what), best_estimate_(best) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

template <typename Derived>
NormReport norms(const Eigen::MatrixBase<Derived>& a, double zero_tol = kZeroTolerance) {
  NormReport r;
  if (a.size() == 0) return r;
  const auto abs = a.derived().template cast<double>().cwiseAbs().eval();
  r.l0 = (abs.array() > zero_tol).count();
  r.l1 = abs.sum();
  r.sup = abs.maxCoeff();
  r.frobenius = std::sqrt(abs.array().square().sum());
  Eigen::BDCSVD<MatrixXd> svd(a.derived().template cast<double>());
  r.spectral = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  return r;
}

template <typename Derived>
double sup_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.size() ? static_cast<double>(a.cwiseAbs().maxCoeff()) : 0.0;
}

/// Largest |eigenvalue| by power iteration on A^2. Throws ConvergenceError
/// with the last iterate when the relative change stays above tol.
template <typename Derived>
double spectral_norm_power(const Eigen::MatrixBase<Derived>& a, double tol = 1e-9,
                           int max_iter = 20000) {
  const MatrixXd m = a.derived().template cast<double>();
  const Index d = m.rows();
  if (d == 0) return 0.0;
  // Deterministic start with every eigen-direction represented generically.
  VectorXd v(d);
  for (Index i = 0; i < d; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    VectorXd w = m * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    v = w / norm;
    if (std::abs(next - estimate) <= tol * next) return next;
    estimate = next;
  }
  throw ConvergenceError("power iteration did not converge", estimate);
}

/// ||A||_2 for symmetric A: full eigensolve up to d = 64, power iteration above.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a, double tol = 1e-9) {
  const Index d = a.rows();
  if (d == 0) return 0.0;
  if (d > 64) return spectral_norm_power(a, tol);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.derived().template cast<double>(),
                                             Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigensolver failed", 0.0);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) throw InputError("min_eigenvalue of an empty matrix");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.derived().template cast<double>(),
                                             Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigensolver failed", std::numeric_limits<double>::quiet_NaN());
  return es.eigenvalues()[0];
}

struct SparsityStats {
  double max_row_q_sum = 0.0;
  double max_diag = 0.0;
};

/// max_i sum_j |a_ij|^q with 0^0 := 0, so q = 0 counts nonzeros per row.
template <typename Derived>
SparsityStats sparsity_class_stats(const Eigen::MatrixBase<Derived>& a, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw InputError("q must lie in [0, 1)");
  SparsityStats s;
  s.max_row_q_sum = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
      const double x = std::abs(static_cast<double>(a(i, j)));
      if (x != 0.0) row += std::pow(x, q);
    }
    s.max_row_q_sum = std::max(s.max_row_q_sum, row);
  }
  s.max_diag = a.rows() ? static_cast<double>(a.diagonal().maxCoeff()) : 0.0;
  return s;
}

}  // namespace szcov

#endif  // SZCOV_METRICS_HPP
