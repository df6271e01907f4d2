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

#ifndef SZCOV_COMMON_HPP
#define SZCOV_COMMON_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace szcov {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::VectorXd;
using MatrixXi64 = MatrixX<std::int64_t>;
using VectorXi64 = VectorX<std::int64_t>;

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

// Failure categories; the CLI maps each to its own exit code.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, Index column, double min_residual)
      : std::runtime_error(what), column_(column), min_residual_(min_residual) {}
  Index column() const { return column_; }
  double min_residual() const { return min_residual_; }

 private:
  Index column_;
  double min_residual_;
};

/// Deterministic child seed for task `path` under `base`. All randomness in
/// the library flows through here so parallel tasks partition the seed space.
inline Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(base);
  for (auto v : path) push(v);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<Seed>(out[1]) << 32) | out[0];
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to slot i of any shared output. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto n = std::min<std::size_t>(threads, count);
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// `count` values log-spaced from lo to hi inclusive, ascending.
inline std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> grid;
  if (count <= 0) return grid;
  if (count == 1) return {hi};
  const double a = std::log(lo), b = std::log(hi);
  grid.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    grid.push_back(std::exp(a + (b - a) * k / (count - 1)));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace szcov

#endif  // SZCOV_COMMON_HPP
