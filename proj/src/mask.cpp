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

#include "szcov/mask.hpp"

#include <string>

namespace szcov {

ObservationMask::ObservationMask(MaskMatrix entries) : entries_(std::move(entries)) {
  for (Index i = 0; i < entries_.rows(); ++i) {
    bool any = false;
    for (Index j = 0; j < entries_.cols(); ++j) {
      const auto v = entries_(i, j);
      if (v > 1)
        throw InputError("mask entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") is not 0/1");
      any = any || v == 1;
    }
    if (!any)
      throw InputError("mask row " + std::to_string(i) +
                       " has no observed component");
  }
}

ObservationMask ObservationMask::all_observed(Index n, Index d) {
  return ObservationMask(MaskMatrix::Ones(n, d));
}

std::vector<Index> ObservationMask::observed_indices(Index i) const {
  std::vector<Index> out;
  for (Index j = 0; j < entries_.cols(); ++j)
    if (entries_(i, j)) out.push_back(j);
  return out;
}

CoObservationCounts pairwise_counts(const ObservationMask& mask) {
  const MatrixXi64 m = mask.entries().cast<std::int64_t>();
  CoObservationCounts out;
  out.samples = mask.rows();
  out.pair = MatrixXi64::Zero(m.cols(), m.cols());
  out.pair.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
  out.pair = out.pair.selfadjointView<Eigen::Lower>();
  out.singleton = out.pair.diagonal();
  return out;
}

A1Report check_a1(const CoObservationCounts& counts, double min_fraction) {
  if (!(min_fraction > 0.0 && min_fraction < 1.0))
    throw InputError("min_fraction must lie in (0, 1)");
  A1Report report;
  const double n = static_cast<double>(std::max<Index>(counts.samples, 1));
  for (Index l = 0; l < counts.dim(); ++l) {
    for (Index m = l; m < counts.dim(); ++m) {
      const double frac = static_cast<double>(counts.pair(l, m)) / n;
      report.min_fraction_seen = std::min(report.min_fraction_seen, frac);
      if (frac < min_fraction) report.violations.emplace_back(l, m);
    }
  }
  report.pass = report.violations.empty();
  return report;
}

MaskDistribution::MaskDistribution(VectorXd rho) : rho_(std::move(rho)) {
  for (Index j = 0; j < rho_.size(); ++j)
    if (!(rho_[j] >= 0.0 && rho_[j] < 1.0))
      throw InputError("missingness probability of component " +
                       std::to_string(j) + " must lie in [0, 1)");
}

ObservationMask generate_mask(Index n, Index d, const MaskDistribution& dist,
                              Seed seed) {
  if (n < 1 || d < 1) throw InputError("mask needs n >= 1 and d >= 1");
  if (dist.dim() != d) throw InputError("mask distribution has wrong dimension");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MaskMatrix m(n, d);
  for (Index i = 0; i < n; ++i) {
    bool any = false;
    while (!any) {
      for (Index j = 0; j < d; ++j) {
        const bool present = unif(rng) >= dist.rho()[j];
        m(i, j) = present ? 1 : 0;
        any = any || present;
      }
    }
  }
  return ObservationMask(std::move(m));
}

MaskDistribution sample_rho(Index d, double lo, double hi, Seed seed) {
  if (!(lo >= 0.0 && lo < hi && hi < 1.0))
    throw InputError("missingness range must satisfy 0 <= lo < hi < 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  VectorXd rho(d);
  for (Index j = 0; j < d; ++j) {
    double r;
    do {
      r = unif(rng);
    } while (r <= lo);  // open interval
    rho[j] = r;
  }
  return MaskDistribution(std::move(rho));
}

}  // namespace szcov
