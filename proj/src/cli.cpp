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

#include "szcov/cli.hpp"

#include "szcov/classify.hpp"
#include "szcov/clime.hpp"
#include "szcov/csv.hpp"
#include "szcov/ingest.hpp"
#include "szcov/metrics.hpp"
#include "szcov/simgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#ifndef SZCOV_VERSION
#define SZCOV_VERSION "unknown"
#endif

namespace szcov::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const RunConfig& c) {
  return json{
      {"subcommand", c.subcommand},
      {"seed", c.seed},
      {"threads", c.threads},
      {"out", c.out},
      {"input", c.input},
      {"base", c.base},
      {"threshold", c.threshold},
      {"lambda", c.lambda},
      {"lambda_omega", c.lambda_omega},
      {"exclude_diagonal", c.exclude_diagonal},
      {"report_norms", c.report_norms},
      {"cv_folds", c.cv_folds},
      {"grid", c.grid},
      {"precision_loss", c.precision_loss},
      {"kind", c.kind},
      {"n_values", c.n_values},
      {"d_values", c.d_values},
      {"reps", c.reps},
      {"estimators", c.estimators},
      {"graph_groups", c.graph_groups},
      {"coupling", c.coupling},
      {"counts", c.counts},
      {"reference", c.reference},
      {"min_prevalence", c.min_prevalence},
      {"k", c.k},
      {"estimator", c.estimator},
      {"repeats", c.repeats},
      {"train_fraction", c.train_fraction},
      {"classes", c.classes},
      {"pooled_t", c.pooled_t},
  };
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

unsigned resolve_threads(const std::string& s) {
  if (s == "auto") return std::max(1u, std::thread::hardware_concurrency());
  const auto v = csv::parse_integer(s, "--threads");
  if (v < 1) throw InputError("--threads must be >= 1 or 'auto'");
  return static_cast<unsigned>(v);
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  if (s == "auto") return grid;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) grid.push_back(csv::parse_double(item, "--grid"));
  if (grid.empty()) throw InputError("--grid is empty");
  std::sort(grid.begin(), grid.end());
  if (grid.front() <= 0.0) throw InputError("--grid values must be positive");
  if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw InputError("--grid contains a duplicate value");
  return grid;
}

CvConfig tuning_of(const RunConfig& c, unsigned threads) {
  CvConfig cv;
  cv.folds = c.cv_folds;
  cv.grid = parse_grid(c.grid);
  cv.precision_loss = parse_precision_loss(c.precision_loss);
  cv.seed = derive_seed(c.seed, {0x7475});
  cv.threads = threads;
  cv.validate();
  return cv;
}

std::string curve_csv(const CvResult& r) {
  std::string out = "penalty,mean_loss\n";
  for (std::size_t g = 0; g < r.grid.size(); ++g)
    out += csv::format_double(r.grid[g]) + "," +
           (std::isfinite(r.mean_loss[g]) ? csv::format_double(r.mean_loss[g]) : "inf") + "\n";
  return out;
}

json norms_json(const MatrixXd& m) {
  const auto n = norms(m);
  return json{{"l0", n.l0}, {"l1", n.l1}, {"sup", n.sup},
              {"spectral", n.spectral}, {"frobenius", n.frobenius}};
}

void write_text(const fs::path& p, const std::string& s) { csv::write_atomic(p, s); }

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;

  fs::path add(const fs::path& p) {
    files.push_back(p.filename().string());
    return p;
  }
};

Outputs output_dir(const std::string& out) {
  Outputs o;
  o.dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(o.dir);
  return o;
}

void finish(const RunConfig& cfg, Outputs& o, const fs::path& manifest, json results,
            std::chrono::steady_clock::time_point start) {
  json m;
  m["tool"] = "szcov";
  m["version"] = SZCOV_VERSION;
  m["subcommand"] = cfg.subcommand;
  m["seed"] = cfg.seed;
  m["config"] = config_json(cfg);
  m["outputs"] = o.files;
  m["results"] = std::move(results);
  m["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(manifest, m);
}

void run_simulate(const RunConfig& c, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentGrid grid;
  grid.n_values = c.n_values;
  grid.d_values = c.d_values;
  grid.replicates = c.reps;
  if (!c.estimators.empty()) {
    grid.estimators.clear();
    for (const auto& e : c.estimators) grid.estimators.push_back(parse_estimator_id(e));
  }
  grid.cv_folds = c.cv_folds;
  grid.seed = c.seed;
  grid.threads = resolve_threads(c.threads);
  GraphModelSpec model;
  model.kind = parse_graph_kind(c.kind);
  model.groups = c.graph_groups;
  model.off_diag_value = c.coupling;

  // --out names either a directory or the results file itself.
  fs::path results_path, stem;
  Outputs o;
  if (fs::path(c.out).extension() == ".csv") {
    results_path = c.out;
    o.dir = results_path.parent_path().empty() ? fs::path(".") : results_path.parent_path();
    fs::create_directories(o.dir);
    stem = o.dir / results_path.stem();
    stem += ".";
  } else {
    o = output_dir(c.out);
    results_path = o.dir / "results.csv";
    stem = o.dir / "";
  }

  const auto table = run_experiment(grid, model);

  std::string rows = "kind,estimator,n,d,rep,seed,spectral_error,n_over_logd\n";
  std::map<std::tuple<int, Index, Index>, std::pair<double, int>> cells;
  for (const auto& r : table.rows) {
    rows += std::string(to_string(r.kind)) + "," + std::string(to_string(r.estimator)) + "," +
            std::to_string(r.n) + "," + std::to_string(r.d) + "," + std::to_string(r.rep) + "," +
            std::to_string(r.seed) + "," + csv::format_double(r.spectral_error) + "," +
            csv::format_double(r.n_over_logd()) + "\n";
    auto& cell = cells[{static_cast<int>(r.estimator), r.n, r.d}];
    cell.first += r.spectral_error;
    cell.second += 1;
  }
  std::string summary = "kind,estimator,n,d,replicates,mean_spectral_error,n_over_logd\n";
  for (const auto& [key, acc] : cells) {
    const auto [e, n, d] = key;
    summary += std::string(to_string(model.kind)) + "," +
               std::string(to_string(static_cast<EstimatorId>(e))) + "," + std::to_string(n) +
               "," + std::to_string(d) + "," + std::to_string(acc.second) + "," +
               csv::format_double(acc.first / acc.second) + "," +
               csv::format_double(static_cast<double>(n) / std::log(static_cast<double>(d))) +
               "\n";
  }
  std::string failures = "estimator,n,d,rep,message\n";
  for (const auto& f : table.failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failures += std::string(to_string(f.estimator)) + "," + std::to_string(f.n) + "," +
                std::to_string(f.d) + "," + std::to_string(f.rep) + "," + msg + "\n";
    log << "warning: " << to_string(f.estimator) << " n=" << f.n << " d=" << f.d
        << " rep=" << f.rep << " failed: " << f.message << "\n";
  }
  write_text(o.add(results_path), rows);
  write_text(o.add(fs::path(stem.string() + "summary.csv")), summary);
  write_text(o.add(fs::path(stem.string() + "failures.csv")), failures);
  finish(c, o, fs::path(stem.string() + "manifest.json"),
         json{{"rows", table.rows.size()}, {"failures", table.failures.size()}}, start);
}

void run_estimate_cov(const RunConfig& c, std::ostream&) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = csv::read_dataset(c.input);
  const auto base = parse_covariance_base(c.base);
  const auto kind = parse_threshold_kind(c.threshold);
  const unsigned threads = resolve_threads(c.threads);
  auto o = output_dir(c.out);
  const auto raw = base_covariance(data, base);

  json results;
  double lambda = 0.0;
  if (c.lambda == "cv") {
    const auto cv = cv_covariance(data, kind, tuning_of(c, threads), base, c.exclude_diagonal);
    lambda = cv.selected;
    write_text(o.add(o.dir / "loss_curve.csv"), curve_csv(cv));
  } else {
    lambda = csv::parse_double(c.lambda, "--lambda");
  }
  const MatrixXd est = apply_threshold(raw.sigma, ThresholdOperator(kind, lambda, c.exclude_diagonal));
  write_text(o.add(o.dir / "covariance.csv"), csv::format_matrix(est, data.names()));
  results["lambda"] = lambda;
  results["threshold"] = c.threshold;
  results["zeroed_pairs"] = raw.zeroed_pairs.size();
  if (c.report_norms) results["norms"] = norms_json(est);
  finish(c, o, o.dir / "manifest.json", results, start);
}

void run_estimate_prec(const RunConfig& c, std::ostream&) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = csv::read_dataset(c.input);
  const auto base = parse_covariance_base(c.base);
  const unsigned threads = resolve_threads(c.threads);
  auto o = output_dir(c.out);
  const auto raw = base_covariance(data, base);

  json results;
  double lambda = 0.0;
  if (c.lambda_omega == "cv") {
    const auto cv = cv_precision(data, tuning_of(c, threads), base);
    lambda = cv.selected;
    write_text(o.add(o.dir / "loss_curve.csv"), curve_csv(cv));
  } else {
    lambda = csv::parse_double(c.lambda_omega, "--lambda-omega");
  }
  const auto est = estimate_precision(raw.sigma, lambda, threads);
  write_text(o.add(o.dir / "precision.csv"), csv::format_matrix(est.omega, data.names()));
  json meta{{"lambda", est.lambda},
            {"feasibility_gap", est.feasibility_gap},
            {"column_iterations", est.column_iterations}};
  write_json(o.add(o.dir / "precision.meta.json"), meta);
  results["lambda"] = lambda;
  results["feasibility_gap"] = est.feasibility_gap;
  if (c.report_norms) results["norms"] = norms_json(est.omega);
  finish(c, o, o.dir / "manifest.json", results, start);
}

struct Prepared {
  LogRatioResult transformed;
  CountTable filtered;
  ReferenceChoice ref;
};

Prepared prepare_counts(const CountTable& table, const RunConfig& c) {
  if (c.reference.empty()) throw InputError("--ref is required");
  const Index ref_index = table.taxon_index(c.reference);
  Prepared p;
  p.filtered = prevalence_filter(table, c.min_prevalence, ref_index);
  p.ref = validate_reference(p.filtered, p.filtered.taxon_index(c.reference));
  p.transformed = log_ratio_transform(p.filtered, p.ref);
  return p;
}

void run_ingest(const RunConfig& c, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto table = read_count_table(c.counts);
  auto o = output_dir(c.out);
  const auto p = prepare_counts(table, c);
  for (Index i : p.transformed.dropped_rows)
    log << "warning: sample row " << i << " has only the reference taxon and was dropped\n";
  write_text(o.add(o.dir / "dataset.csv"), csv::format_dataset(p.transformed.data));
  if (!p.transformed.groups.empty()) {
    std::string g = std::string(kGroupColumn) + "\n";
    for (const auto& s : p.transformed.groups) g += s + "\n";
    write_text(o.add(o.dir / "groups.csv"), g);
  }
  json results{{"reference", p.ref.name},
               {"samples", p.transformed.data.rows()},
               {"components", p.transformed.data.cols()},
               {"taxa_before_filter", table.taxa_count()},
               {"dropped_rows", p.transformed.dropped_rows}};
  finish(c, o, o.dir / "manifest.json", results, start);
}

void run_classify(const RunConfig& c, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  auto table = read_count_table(c.counts);
  if (table.groups.empty())
    throw InputError("classify needs a '" + std::string(kGroupColumn) + "' column");
  std::vector<std::string> classes = c.classes;
  if (classes.empty()) {
    classes = table.groups;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() != 2)
      throw InputError("table has " + std::to_string(classes.size()) +
                       " groups; choose two with --classes");
  }
  if (classes.size() != 2 || classes[0] == classes[1])
    throw InputError("--classes must name two distinct groups");
  std::vector<Index> rows;
  for (Index i = 0; i < table.samples(); ++i) {
    const auto& g = table.groups[static_cast<std::size_t>(i)];
    if (g == classes[0] || g == classes[1]) rows.push_back(i);
  }
  table = table.select_rows(rows);
  auto o = output_dir(c.out);
  const auto p = prepare_counts(table, c);
  for (Index i : p.transformed.dropped_rows)
    log << "warning: sample row " << rows[static_cast<std::size_t>(i)]
        << " has only the reference taxon and was dropped\n";
  std::vector<int> labels;
  for (const auto& g : p.transformed.groups) labels.push_back(g == classes[0] ? 1 : 2);

  EvaluationConfig ec;
  ec.k = c.k;
  ec.estimator = parse_lda_estimator(c.estimator);
  ec.repeats = c.repeats;
  ec.train_fraction = c.train_fraction;
  ec.cv_folds = c.cv_folds;
  ec.pooled_t = c.pooled_t;
  ec.seed = c.seed;
  ec.threads = resolve_threads(c.threads);
  const auto report = evaluate(p.transformed.data, labels, ec);

  std::string summary = "estimator,k,class1_pct,class2_pct,overall_pct\n";
  summary += c.estimator + "," + std::to_string(c.k) + "," + csv::format_double(report.class1_pct) +
             "," + csv::format_double(report.class2_pct) + "," +
             csv::format_double(report.overall_pct) + "\n";
  std::string per = "repeat,class1_pct,class2_pct,overall_pct,penalty,unscored_rows,max_ridge\n";
  for (std::size_t r = 0; r < report.per_repeat.size(); ++r) {
    const auto& x = report.per_repeat[r];
    per += std::to_string(r) + "," + csv::format_double(x.class1_pct) + "," +
           csv::format_double(x.class2_pct) + "," + csv::format_double(x.overall_pct) + "," +
           csv::format_double(x.penalty) + "," + std::to_string(x.unscored) + "," +
           csv::format_double(x.max_ridge) + "\n";
  }
  write_text(o.add(o.dir / "classification.csv"), summary);
  write_text(o.add(o.dir / "repeats.csv"), per);
  json results{{"class1", classes[0]},
               {"class2", classes[1]},
               {"samples", p.transformed.data.rows()},
               {"components", p.transformed.data.cols()},
               {"overall_pct", report.overall_pct},
               {"dropped_rows", p.transformed.dropped_rows}};
  finish(c, o, o.dir / "manifest.json", results, start);
}

using Override = std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>;

template <typename T>
CLI::Option* bind_option(CLI::App* app, std::vector<Override>& ov, RunConfig& cfg, const std::string& name,
                  T RunConfig::*field, const std::string& help) {
  CLI::Option* opt;
  if constexpr (std::is_same_v<T, bool>)
    opt = app->add_flag(name, cfg.*field, help);
  else
    opt = app->add_option(name, cfg.*field, help)->capture_default_str();
  ov.emplace_back(opt, [field](RunConfig& dst, const RunConfig& src) { dst.*field = src.*field; });
  return opt;
}

}  // namespace

std::string to_json(const RunConfig& cfg) { return config_json(cfg).dump(2); }

RunConfig run_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.contains("config") && j.at("config").is_object()) j = j.at("config");
  if (!j.is_object()) throw InputError("config must be a JSON object");
  RunConfig c;
  try {
    take(j, "subcommand", c.subcommand);
    take(j, "seed", c.seed);
    take(j, "threads", c.threads);
    take(j, "out", c.out);
    take(j, "input", c.input);
    take(j, "base", c.base);
    take(j, "threshold", c.threshold);
    take(j, "lambda", c.lambda);
    take(j, "lambda_omega", c.lambda_omega);
    take(j, "exclude_diagonal", c.exclude_diagonal);
    take(j, "report_norms", c.report_norms);
    take(j, "cv_folds", c.cv_folds);
    take(j, "grid", c.grid);
    take(j, "precision_loss", c.precision_loss);
    take(j, "kind", c.kind);
    take(j, "n_values", c.n_values);
    take(j, "d_values", c.d_values);
    take(j, "reps", c.reps);
    take(j, "estimators", c.estimators);
    take(j, "graph_groups", c.graph_groups);
    take(j, "coupling", c.coupling);
    take(j, "counts", c.counts);
    take(j, "reference", c.reference);
    take(j, "min_prevalence", c.min_prevalence);
    take(j, "k", c.k);
    take(j, "estimator", c.estimator);
    take(j, "repeats", c.repeats);
    take(j, "train_fraction", c.train_fraction);
    take(j, "classes", c.classes);
    take(j, "pooled_t", c.pooled_t);
  } catch (const json::exception& e) {
    throw InputError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

void run(const RunConfig& cfg, std::ostream& log) {
  if (cfg.subcommand == "simulate") return run_simulate(cfg, log);
  if (cfg.subcommand == "estimate-cov") return run_estimate_cov(cfg, log);
  if (cfg.subcommand == "estimate-prec") return run_estimate_prec(cfg, log);
  if (cfg.subcommand == "ingest") return run_ingest(cfg, log);
  if (cfg.subcommand == "classify") return run_classify(cfg, log);
  throw InputError("unknown subcommand '" + cfg.subcommand + "'");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<Override> ov;
  std::string config_path;

  CLI::App app{"Covariance and precision estimation for data with structural zeros", "szcov"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SZCOV_VERSION);

  auto common = [&](CLI::App* sub) {
    bind_option(sub, ov, cfg, "--seed", &RunConfig::seed, "Base random seed");
    bind_option(sub, ov, cfg, "--threads", &RunConfig::threads, "Worker threads, or 'auto'");
    bind_option(sub, ov, cfg, "--out", &RunConfig::out, "Output directory");
    sub->add_option("--config", config_path,
                    "JSON config or manifest; explicit flags override its values");
  };
  auto tuning = [&](CLI::App* sub) {
    bind_option(sub, ov, cfg, "--cv-folds", &RunConfig::cv_folds, "Cross-validation folds");
    bind_option(sub, ov, cfg, "--grid", &RunConfig::grid, "Comma-separated penalties, or 'auto'");
  };

  auto* sim = app.add_subcommand("simulate", "Estimator comparison on band/cluster models");
  common(sim);
  tuning(sim);
  bind_option(sim, ov, cfg, "--kind", &RunConfig::kind, "band or cluster");
  bind_option(sim, ov, cfg, "--n", &RunConfig::n_values, "Sample sizes")->delimiter(',');
  bind_option(sim, ov, cfg, "--d", &RunConfig::d_values, "Dimensions")->delimiter(',');
  bind_option(sim, ov, cfg, "--reps", &RunConfig::reps, "Replicates per (n, d)");
  bind_option(sim, ov, cfg, "--estimators", &RunConfig::estimators, "Subset of estimators (default all)")
      ->delimiter(',');
  bind_option(sim, ov, cfg, "--groups", &RunConfig::graph_groups, "Bandwidth or cluster count (0: d/20)");
  bind_option(sim, ov, cfg, "--coupling", &RunConfig::coupling, "Off-diagonal precision value");

  auto* cov = app.add_subcommand("estimate-cov", "Thresholded covariance estimate");
  common(cov);
  tuning(cov);
  bind_option(cov, ov, cfg, "--input", &RunConfig::input, "Dataset CSV with NA tokens");
  bind_option(cov, ov, cfg, "--base", &RunConfig::base, "renorm or naive");
  bind_option(cov, ov, cfg, "--threshold", &RunConfig::threshold, "hard or soft");
  bind_option(cov, ov, cfg, "--lambda", &RunConfig::lambda, "Threshold value, or 'cv'");
  bind_option(cov, ov, cfg, "--exclude-diagonal", &RunConfig::exclude_diagonal, "Leave the diagonal unthresholded");
  bind_option(cov, ov, cfg, "--report-norms", &RunConfig::report_norms, "Record norms of the estimate");

  auto* prec = app.add_subcommand("estimate-prec", "Constrained l1 precision estimate");
  common(prec);
  tuning(prec);
  bind_option(prec, ov, cfg, "--input", &RunConfig::input, "Dataset CSV with NA tokens");
  bind_option(prec, ov, cfg, "--base", &RunConfig::base, "renorm or naive");
  bind_option(prec, ov, cfg, "--lambda-omega", &RunConfig::lambda_omega, "Penalty value, or 'cv'");
  bind_option(prec, ov, cfg, "--cv-loss", &RunConfig::precision_loss, "trace-of-square or square-of-trace");
  bind_option(prec, ov, cfg, "--report-norms", &RunConfig::report_norms, "Record norms of the estimate");

  auto* ing = app.add_subcommand("ingest", "Log-ratio transform of a count table");
  common(ing);
  bind_option(ing, ov, cfg, "--counts", &RunConfig::counts, "Count table CSV");
  bind_option(ing, ov, cfg, "--ref", &RunConfig::reference, "Reference taxon name");
  bind_option(ing, ov, cfg, "--min-prevalence", &RunConfig::min_prevalence, "Minimum nonzero fraction");

  auto* cls = app.add_subcommand("classify", "Repeated-split discriminant evaluation");
  common(cls);
  bind_option(cls, ov, cfg, "--cv-folds", &RunConfig::cv_folds, "Cross-validation folds");
  bind_option(cls, ov, cfg, "--counts", &RunConfig::counts, "Count table CSV with a group column");
  bind_option(cls, ov, cfg, "--ref", &RunConfig::reference, "Reference taxon name");
  bind_option(cls, ov, cfg, "--min-prevalence", &RunConfig::min_prevalence, "Minimum nonzero fraction");
  bind_option(cls, ov, cfg, "--k", &RunConfig::k, "Components kept by the t-test");
  bind_option(cls, ov, cfg, "--estimator", &RunConfig::estimator, "soft, hard or clime");
  bind_option(cls, ov, cfg, "--repeats", &RunConfig::repeats, "Random splits");
  bind_option(cls, ov, cfg, "--train-fraction", &RunConfig::train_fraction, "Training share per class");
  bind_option(cls, ov, cfg, "--classes", &RunConfig::classes, "The two groups to compare")->delimiter(',');
  bind_option(cls, ov, cfg, "--pooled-t", &RunConfig::pooled_t, "Pooled-variance t-test instead of Welch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    RunConfig effective = cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InputError("cannot open config '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      effective = run_config_from_json(buf.str());
      for (auto& [opt, copy] : ov)
        if (opt->count() > 0) copy(effective, cfg);
    }
    effective.subcommand = app.get_subcommands().front()->get_name();
    run(effective, err);
    return kSuccess;
  } catch (const InfeasibleError& e) {
    err << "error (infeasible program): " << e.what() << "\n";
    return kInfeasible;
  } catch (const NumericalError& e) {
    err << "error (numerical failure): " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const InputError& e) {
    err << "error (input): " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error (input): " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace szcov::cli
