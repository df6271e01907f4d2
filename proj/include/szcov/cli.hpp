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

// Batch entry point. A RunConfig fully determines a run together with its
// seed; it serializes to JSON and is embedded in every manifest, so a
// manifest can be passed back through --config to repeat the run.

#ifndef SZCOV_CLI_HPP
#define SZCOV_CLI_HPP

#include "szcov/common.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace szcov::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUnexpected = 1,
  kInputError = 2,
  kNumericalFailure = 3,
  kInfeasible = 4,
};

struct RunConfig {
  std::string subcommand;
  Seed seed = 1;
  std::string threads = "1";  // count or "auto"
  std::string out = ".";

  // estimate-cov / estimate-prec
  std::string input;
  std::string base = "renorm";
  std::string threshold = "soft";
  std::string lambda = "cv";
  std::string lambda_omega = "cv";
  bool exclude_diagonal = false;
  bool report_norms = false;

  // tuning
  int cv_folds = 5;
  std::string grid = "auto";
  std::string precision_loss = "trace-of-square";

  // simulate
  std::string kind = "band";
  std::vector<Index> n_values = {75, 150, 300};
  std::vector<Index> d_values = {50};
  int reps = 20;
  std::vector<std::string> estimators;  // empty: all six
  int graph_groups = 0;
  double coupling = 0.5;

  // ingest / classify
  std::string counts;
  std::string reference;
  double min_prevalence = 0.2;
  Index k = 10;
  std::string estimator = "soft";
  int repeats = 20;
  double train_fraction = 5.0 / 6.0;
  std::vector<std::string> classes;  // two group labels; empty: the table's two groups
  bool pooled_t = false;

  bool operator==(const RunConfig&) const = default;
};

std::string to_json(const RunConfig& cfg);
/// Accepts a bare config object or a manifest containing one under "config".
RunConfig run_config_from_json(std::string_view text);

/// Executes one subcommand. Errors propagate as the library's exceptions.
void run(const RunConfig& cfg, std::ostream& log);

/// Parses arguments, runs, and maps failures to exit codes with a one-line
/// diagnostic on `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace szcov::cli

#endif  // SZCOV_CLI_HPP
