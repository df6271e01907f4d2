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

// Generalized thresholding operators s_lambda and their entry-wise
// application to covariance estimates.

#ifndef SZCOV_THRESHOLD_HPP
#define SZCOV_THRESHOLD_HPP

#include "szcov/covariance.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace szcov {

enum class ThresholdKind { hard, soft };

inline std::string_view to_string(ThresholdKind k) {
  return k == ThresholdKind::hard ? "hard" : "soft";
}

inline ThresholdKind parse_threshold_kind(std::string_view s) {
  if (s == "hard") return ThresholdKind::hard;
  if (s == "soft") return ThresholdKind::soft;
  throw InputError("unknown threshold kind '" + std::string(s) + "'");
}

template <typename Scalar>
Scalar soft_threshold(Scalar x, Scalar lambda) {
  const Scalar ax = std::abs(x);
  Scalar shrunk = ax - lambda;
  if (!(shrunk > Scalar(0))) return Scalar(0);
  // Round toward |x| so that |s(x) - x| <= lambda also holds in floating point.
  if (ax - shrunk > lambda) shrunk = std::nextafter(shrunk, ax);
  return x < Scalar(0) ? -shrunk : shrunk;
}

template <typename Scalar>
Scalar hard_threshold(Scalar x, Scalar lambda) {
  return std::abs(x) > lambda ? x : Scalar(0);
}

struct ThresholdOperator {
  ThresholdKind kind = ThresholdKind::soft;
  double lambda = 0.0;
  /// Leave the diagonal untouched. Off by default: every entry is thresholded.
  bool exclude_diagonal = false;

  ThresholdOperator() = default;
  ThresholdOperator(ThresholdKind k, double l, bool keep_diag = false)
      : kind(k), lambda(l), exclude_diagonal(keep_diag) {
    if (!(lambda >= 0.0)) throw InputError("threshold lambda must be >= 0");
  }

  template <typename Scalar>
  Scalar operator()(Scalar x) const {
    const auto l = static_cast<Scalar>(lambda);
    return kind == ThresholdKind::hard ? hard_threshold(x, l) : soft_threshold(x, l);
  }
};

/// Entry-wise s_lambda of a (square) matrix expression.
template <typename Derived>
MatrixX<typename Derived::Scalar> apply_threshold(const Eigen::MatrixBase<Derived>& a,
                                                  const ThresholdOperator& op) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out = a.unaryExpr([&op](Scalar x) { return op(x); });
  if (op.exclude_diagonal) {
    const Index k = std::min(a.rows(), a.cols());
    out.diagonal().head(k) = a.diagonal().head(k);
  }
  return out;
}

template <typename Scalar>
BasicCovarianceEstimate<Scalar> apply_threshold(const BasicCovarianceEstimate<Scalar>& est,
                                                const ThresholdOperator& op) {
  BasicCovarianceEstimate<Scalar> out = est;
  out.sigma = apply_threshold(est.sigma, op);
  return out;
}

struct OperatorViolation {
  int condition = 0;  // 1: |s(x)| <= |x|, 2: s(x) = 0 for |x| <= lambda, 3: |s(x) - x| <= lambda
  double x = 0.0;
  double value = 0.0;
};

struct OperatorCheck {
  bool pass = true;
  std::optional<OperatorViolation> first_violation;
  std::size_t violations = 0;
};

/// Checks the three generalized-thresholding conditions of a scalar map at
/// every probe point.
inline OperatorCheck validate_operator(const std::function<double(double)>& s,
                                       double lambda, const std::vector<double>& probes) {
  if (probes.empty()) throw InputError("validate_operator needs at least one probe");
  OperatorCheck check;
  for (double x : probes) {
    const double v = s(x);
    int failed = 0;
    if (std::abs(v) > std::abs(x))
      failed = 1;
    else if (std::abs(x) <= lambda && v != 0.0)
      failed = 2;
    else if (std::abs(v - x) > lambda)
      failed = 3;
    if (failed) {
      ++check.violations;
      if (!check.first_violation) check.first_violation = OperatorViolation{failed, x, v};
    }
  }
  check.pass = check.violations == 0;
  return check;
}

inline OperatorCheck validate_operator(const ThresholdOperator& op,
                                       const std::vector<double>& probes) {
  return validate_operator([&op](double x) { return op(x); }, op.lambda, probes);
}

}  // namespace szcov

#endif  // SZCOV_THRESHOLD_HPP
