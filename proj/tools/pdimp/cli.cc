/*
 * Copyright 2026 The pdimp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdimp/bagged_trees.h"
#include "pdimp/csv.h"
#include "pdimp/error.h"
#include "pdimp/expression.h"
#include "pdimp/external_model.h"
#include "pdimp/format.h"
#include "pdimp/grid.h"
#include "pdimp/importance.h"
#include "pdimp/interaction.h"
#include "pdimp/knn_model.h"
#include "pdimp/linear_model.h"
#include "pdimp/model_io.h"
#include "pdimp/partial_dependence.h"
#include "pdimp/report_io.h"
#include "pdimp/rng.h"
#include "pdimp/simulation.h"

#ifndef PDIMP_VERSION_STRING
#define PDIMP_VERSION_STRING "0.0.0"
#endif

namespace pdimp::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Bad flag values and missing or conflicting flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string data;
  std::string target;
  std::string model;
  std::string model_file;
  std::string expr;
  std::string external;
  std::string features;
  std::string pairs;
  std::string grid;
  std::string measure = "sd";
  std::string aggregator = "mean";
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string format = "csv";
  std::size_t top = 10;
  bool with_h = false;
  std::int64_t timeout_ms = 30000;
  // simulate
  std::string kind = "friedman";
  std::size_t n = 1000;
  std::optional<double> sigma;
  std::string coef = "1,3,-5";
  std::string out;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (text.back() == sep) parts.emplace_back();
  return parts;
}

template <typename F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> output_formats(const RunConfig& cfg) {
  auto formats = split_list(cfg.format);
  if (formats.empty()) throw UsageError("--format must not be empty");
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") {
      throw UsageError("unsupported output format '" + f +
                       "' (expected csv, json or csv,json)");
    }
  }
  return formats;
}

// ---------------------------------------------------------------- models

struct ModelSpec {
  std::string kind;
  std::map<std::string, std::string> params;
};

ModelSpec parse_model_spec(const std::string& text) {
  ModelSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (spec.kind != "linear" && spec.kind != "knn" && spec.kind != "bagged") {
    throw UsageError("unknown model kind '" + spec.kind +
                     "' (expected linear, knn or bagged)");
  }
  if (colon == std::string::npos) return spec;
  for (const auto& kv : split_list(text.substr(colon + 1))) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("model parameter '" + kv + "' is not key=value");
    }
    spec.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return spec;
}

std::uint64_t take_count(ModelSpec& spec, const std::string& key,
                         std::uint64_t fallback, bool allow_zero = false) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  const std::string text = it->second;
  spec.params.erase(it);
  std::uint64_t v = 0;
  std::size_t used = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text[0] == '-' ||
      (!allow_zero && v == 0)) {
    throw UsageError("model parameter " + key + "=" + text +
                     " is not a valid count");
  }
  return v;
}

std::unique_ptr<PredictionModel> fit_from_spec(const std::string& text,
                                               const Dataset& data,
                                               const std::string& target,
                                               const RunConfig& cfg) {
  ModelSpec spec = parse_model_spec(text);
  std::unique_ptr<PredictionModel> model;
  if (spec.kind == "linear") {
    if (!spec.params.empty()) {
      throw UsageError("linear model takes no parameters");
    }
    model = std::make_unique<LinearModel>(fit_linear(data, target));
  } else if (spec.kind == "knn") {
    const auto k = take_count(spec, "k", 10);
    if (!spec.params.empty()) {
      throw UsageError("unknown knn parameter '" + spec.params.begin()->first + "'");
    }
    model = std::make_unique<KnnModel>(fit_knn(data, target, k));
  } else {
    TreeParams p;
    p.n_trees = take_count(spec, "n_trees", p.n_trees);
    p.max_depth = take_count(spec, "max_depth", p.max_depth, true);
    p.min_leaf = take_count(spec, "min_leaf", p.min_leaf);
    p.seed = take_count(spec, "seed", cfg.seed, true);
    p.bootstrap = take_count(spec, "bootstrap", 1, true) != 0;
    if (!spec.params.empty()) {
      throw UsageError("unknown bagged parameter '" + spec.params.begin()->first +
                       "'");
    }
    model = std::make_unique<BaggedTreesModel>(
        fit_bagged_trees(data, target, p, cfg.workers));
  }
  return model;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

// Model plus the feature table it is evaluated on.
struct Bound {
  std::unique_ptr<PredictionModel> model;
  Dataset x;
};

Dataset load_data(const RunConfig& cfg, std::ostream& err) {
  LoadedCsv loaded = load_csv_file(cfg.data);
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
  return std::move(loaded.dataset);
}

int count_sources(const RunConfig& cfg) {
  return !cfg.model.empty() + !cfg.model_file.empty() + !cfg.expr.empty() +
         !cfg.external.empty();
}

std::unique_ptr<ExternalModel> spawn(const RunConfig& cfg) {
  if (cfg.timeout_ms <= 0) throw UsageError("--timeout-ms must be positive");
  std::vector<std::string> command;
  command = as_usage([&] { return split_command_line(cfg.external); });
  if (command.empty()) throw UsageError("--external names no command");
  return spawn_external(command, std::chrono::milliseconds(cfg.timeout_ms));
}

Bound bind_model(const RunConfig& cfg, std::ostream& err) {
  if (count_sources(cfg) != 1) {
    throw UsageError(
        "exactly one of --model, --model-file, --expr, --external is required");
  }
  if (cfg.data.empty()) throw UsageError("--data is required");
  if (!cfg.model.empty() && cfg.target.empty()) {
    throw UsageError("--target is required when fitting --model");
  }
  if (!cfg.model.empty()) parse_model_spec(cfg.model);

  const Dataset data = load_data(cfg, err);
  Bound b;
  b.x = cfg.target.empty() ? data : split_target(data, cfg.target).first;
  if (!cfg.model.empty()) {
    b.model = fit_from_spec(cfg.model, data, cfg.target, cfg);
  } else if (!cfg.model_file.empty()) {
    b.model = model_from_json(read_text(cfg.model_file));
  } else if (!cfg.expr.empty()) {
    b.model = std::make_unique<ExpressionModel>(parse_expression(cfg.expr, b.x.schema()));
  } else {
    b.model = spawn(cfg);
  }
  const auto names = b.model->feature_names();
  if (names != b.x.feature_names()) b.x = b.x.select(names);
  return b;
}

// ---------------------------------------------------------------- manifest

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void write_manifest(const RunConfig& cfg, const fs::path& dir,
                    const std::vector<fs::path>& artifacts) {
  ojson config;
  config["subcommand"] = cfg.subcommand;
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) config[key] = v;
  };
  put("data", cfg.data);
  put("target", cfg.target);
  put("model", cfg.model);
  put("model_file", cfg.model_file);
  put("expr", cfg.expr);
  put("external", cfg.external);
  put("features", cfg.features);
  put("pairs", cfg.pairs);
  put("grid", cfg.grid);
  if (cfg.subcommand == "simulate") {
    config["kind"] = cfg.kind;
    config["n"] = cfg.n;
    if (cfg.sigma) config["sigma"] = *cfg.sigma;
    if (cfg.kind == "linear") config["coef"] = cfg.coef;
    config["out"] = cfg.out;
  } else {
    config["measure"] = cfg.measure;
    config["aggregator"] = cfg.aggregator;
    config["workers"] = cfg.workers;
    config["format"] = cfg.format;
    config["out_dir"] = cfg.out_dir;
  }
  if (cfg.subcommand == "interact") {
    config["with_h"] = cfg.with_h;
    config["top"] = cfg.top;
  }
  if (!cfg.external.empty()) config["timeout_ms"] = cfg.timeout_ms;

  ojson doc;
  doc["tool"] = "pdimp";
  doc["version"] = PDIMP_VERSION_STRING;
  doc["rng"] = "pdimp-splitmix64/v" + std::to_string(Rng::kVersion);
  doc["seed"] = cfg.seed;
  doc["config"] = std::move(config);
  ojson files = ojson::array();
  for (const auto& p : artifacts) files.push_back(p.filename().string());
  doc["artifacts"] = std::move(files);
  doc["timestamp"] = utc_timestamp();
  write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void emit(const PlotData& data, const RunConfig& cfg, const fs::path& dir,
          const std::string& stem, std::vector<fs::path>& artifacts) {
  for (const auto& f : output_formats(cfg)) {
    for (auto& p : emit_plot_data(data, f, dir, stem)) artifacts.push_back(p);
  }
}

PDOptions pd_options(const RunConfig& cfg) {
  PDOptions o;
  o.workers = cfg.workers;
  o.aggregator = as_usage([&] { return Aggregator::parse(cfg.aggregator); });
  return o;
}

GridStrategy grid_of(const RunConfig& cfg, const char* fallback) {
  return as_usage(
      [&] { return GridStrategy::parse(cfg.grid.empty() ? fallback : cfg.grid); });
}

FlatnessMeasure measure_of(const RunConfig& cfg) {
  return as_usage([&] { return parse_flatness_measure(cfg.measure); });
}

// ---------------------------------------------------------------- commands

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.model.empty() || cfg.data.empty() || cfg.target.empty()) {
    throw UsageError("fit requires --data, --target and --model");
  }
  if (count_sources(cfg) != 1) throw UsageError("fit takes only --model");
  output_formats(cfg);
  parse_model_spec(cfg.model);
  const Dataset data = load_data(cfg, err);
  auto model = fit_from_spec(cfg.model, data, cfg.target, cfg);
  auto [x, y] = split_target(data, cfg.target);
  const auto pred = model->predict(x);
  double sse = 0;
  for (std::size_t i = 0; i < y.size(); ++i) sse += (pred[i] - y[i]) * (pred[i] - y[i]);
  const double rmse = y.empty() ? 0.0 : std::sqrt(sse / y.size());

  const fs::path dir = prepare_out_dir(cfg);
  std::vector<fs::path> artifacts{dir / "model.json"};
  write_text(artifacts[0], model_to_json(*model) + "\n");
  write_manifest(cfg, dir, artifacts);
  out << "fitted " << model->kind() << " on " << x.num_rows() << " rows, "
      << x.num_columns() << " features; training rmse " << format_double(rmse)
      << "\n";
  return kExitOk;
}

int cmd_importance(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  output_formats(cfg);
  ImportanceOptions opt;
  opt.grid = grid_of(cfg, "unique");
  opt.measure = measure_of(cfg);
  opt.pd = pd_options(cfg);
  Bound b = bind_model(cfg, err);
  const ImportanceReport report = importance_all(*b.model, b.x, opt);
  const fs::path dir = prepare_out_dir(cfg);
  std::vector<fs::path> artifacts;
  emit(&report, cfg, dir, "importance", artifacts);
  write_manifest(cfg, dir, artifacts);
  out << importance_table(report);
  return kExitOk;
}

std::vector<std::string> required_features(const RunConfig& cfg, std::size_t lo,
                                           std::size_t hi) {
  const auto f = split_list(cfg.features);
  if (f.size() < lo || f.size() > hi) {
    throw UsageError("--features needs " +
                     (lo == hi ? std::to_string(lo) : std::to_string(lo) + " or " +
                                                          std::to_string(hi)) +
                     " name(s)");
  }
  return f;
}

int cmd_pdp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  output_formats(cfg);
  const auto features = required_features(cfg, 1, 2);
  const GridStrategy strategy = grid_of(cfg, "unique");
  const PDOptions opt = pd_options(cfg);
  Bound b = bind_model(cfg, err);
  const Grid grid = build_grid(b.x, features, strategy);
  const PDResult pd = features.size() == 1
                          ? partial_dependence(*b.model, b.x, grid, opt)
                          : joint_partial_dependence(*b.model, b.x, grid, opt);
  const fs::path dir = prepare_out_dir(cfg);
  std::vector<fs::path> artifacts;
  emit(&pd, cfg, dir, "pdp", artifacts);
  write_manifest(cfg, dir, artifacts);
  out << "partial dependence of " << cfg.features << ": " << pd.values.size()
      << " grid points, baseline " << format_double(pd.baseline) << "\n";
  return kExitOk;
}

int cmd_ice(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  output_formats(cfg);
  const auto features = required_features(cfg, 1, 1);
  const GridStrategy strategy = grid_of(cfg, "unique");
  const PDOptions opt = pd_options(cfg);
  Bound b = bind_model(cfg, err);
  const Grid grid = build_grid(b.x, features, strategy);
  const ICEResult ice = ice_curves(*b.model, b.x, grid, opt);
  const fs::path dir = prepare_out_dir(cfg);
  std::vector<fs::path> artifacts;
  emit(&ice, cfg, dir, "ice", artifacts);
  write_manifest(cfg, dir, artifacts);
  out << "ice curves of " << cfg.features << ": " << ice.n_rows << " rows x "
      << grid.size() << " points\n";
  return kExitOk;
}

std::vector<FeaturePair> pairs_of(const RunConfig& cfg) {
  std::vector<FeaturePair> pairs;
  if (!cfg.pairs.empty()) {
    for (const auto& item : split_list(cfg.pairs)) {
      const auto ab = split_list(item, ':');
      if (ab.size() != 2 || ab[0].empty() || ab[1].empty()) {
        throw UsageError("--pairs entry '" + item + "' is not a:b");
      }
      pairs.emplace_back(ab[0], ab[1]);
    }
  } else if (!cfg.features.empty()) {
    const auto f = split_list(cfg.features);
    if (f.size() < 2) throw UsageError("--features needs at least 2 names");
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) pairs.emplace_back(f[i], f[j]);
    }
  }
  return pairs;
}

int cmd_interact(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  output_formats(cfg);
  InteractionOptions opt;
  opt.grid = grid_of(cfg, "quantile:10");
  opt.measure = measure_of(cfg);
  opt.with_h = cfg.with_h;
  opt.pd = pd_options(cfg);
  const auto pairs = pairs_of(cfg);
  Bound b = bind_model(cfg, err);
  const InteractionReport report = interaction_matrix(*b.model, b.x, pairs, opt);
  const fs::path dir = prepare_out_dir(cfg);
  std::vector<fs::path> artifacts;
  emit(&report, cfg, dir, "interaction", artifacts);
  write_manifest(cfg, dir, artifacts);
  out << interaction_table(report, cfg.top);
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.out.empty()) throw UsageError("simulate requires --out");
  SimulationSpec spec;
  spec.n = cfg.n;
  spec.seed = cfg.seed;
  if (cfg.kind == "friedman") {
    spec.kind = FriedmanSimulation{cfg.sigma.value_or(1.0)};
  } else if (cfg.kind == "linear") {
    const auto parts = split_list(cfg.coef);
    std::vector<double> c;
    for (const auto& p : parts) {
      auto v = parse_finite_double(p);
      if (!v) throw UsageError("--coef '" + cfg.coef + "' is not three numbers");
      c.push_back(*v);
    }
    if (c.size() != 3) throw UsageError("--coef needs exactly three numbers");
    spec.kind = LinearSimulation{c[0], c[1], c[2], cfg.sigma.value_or(0.01)};
  } else {
    throw UsageError("unknown --kind '" + cfg.kind + "' (expected linear or friedman)");
  }
  const Dataset d = as_usage([&] { return generate(spec); });
  const fs::path path(cfg.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream csv;
  write_csv(d, csv);
  write_text(path, csv.str());
  fs::path dir = cfg.out_dir != "." ? fs::path(cfg.out_dir)
                                    : (path.has_parent_path() ? path.parent_path()
                                                              : fs::path("."));
  fs::create_directories(dir);
  write_manifest(cfg, dir, {path});
  out << "wrote " << d.num_rows() << " rows x " << d.num_columns()
      << " columns to " << cfg.out << "\n";
  return kExitOk;
}

int cmd_bridge_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.external.empty()) throw UsageError("bridge-check requires --external");
  auto model = spawn(cfg);
  out << "protocol " << model->protocol_version() << "; features:";
  for (const auto& f : model->feature_names()) out << " " << f;
  out << "\n";
  if (!cfg.data.empty()) {
    const Dataset data = load_data(cfg, err);
    Dataset x = cfg.target.empty() ? data : split_target(data, cfg.target).first;
    const auto names = model->feature_names();
    if (names != x.feature_names()) x = x.select(names);
    const auto pred = model->predict(x);
    out << "received " << pred.size() << " predictions for " << x.num_rows()
        << " rows\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- parsing

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--data", cfg.data, "training CSV");
  sub->add_option("--target", cfg.target, "target column, dropped from features");
  sub->add_option("--model", cfg.model,
                  "linear | knn:k=K | bagged:n_trees=,max_depth=,min_leaf=,seed=");
  sub->add_option("--model-file", cfg.model_file, "model JSON written by fit");
  sub->add_option("--expr", cfg.expr, "closed-form expression over the features");
  sub->add_option("--external", cfg.external, "command line of a bridge child");
  sub->add_option("--timeout-ms", cfg.timeout_ms, "bridge reply timeout");
}

void add_run_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--grid", cfg.grid,
                  "unique | quantile:Q | equidistant:K[:LO:HI]");
  sub->add_option("--measure", cfg.measure, "sd | mad | range4");
  sub->add_option("--aggregator", cfg.aggregator, "mean | median | trimmed:ALPHA");
  sub->add_option("--workers", cfg.workers, "worker threads (default $PDIMP_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "seed for models that draw randomness");
  sub->add_option("--out-dir", cfg.out_dir, "artifact directory");
  sub->add_option("--format", cfg.format, "csv | json | csv,json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("PDIMP_WORKERS"); env && *env) {
    std::size_t used = 0;
    unsigned long long w = 0;
    try {
      w = std::stoull(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || env[used] != '\0' || env[0] == '-' || w == 0) {
      err << "pdimp: PDIMP_WORKERS='" << env << "' is not a positive integer\n";
      return kExitUsage;
    }
    cfg.workers = static_cast<std::size_t>(w);
  }
  CLI::App app{"Partial dependence, importance and interaction toolkit", "pdimp"};
  app.set_version_flag("--version", PDIMP_VERSION_STRING);
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "fit a built-in model and save it");
  add_model_flags(fit, cfg);
  add_run_flags(fit, cfg);

  auto* imp = app.add_subcommand("importance", "PD-based importance of every feature");
  add_model_flags(imp, cfg);
  add_run_flags(imp, cfg);

  auto* pdp = app.add_subcommand("pdp", "one- or two-feature partial dependence");
  add_model_flags(pdp, cfg);
  add_run_flags(pdp, cfg);
  pdp->add_option("--features", cfg.features, "f or f1,f2");

  auto* ice = app.add_subcommand("ice", "individual conditional expectation curves");
  add_model_flags(ice, cfg);
  add_run_flags(ice, cfg);
  ice->add_option("--features", cfg.features, "one feature");

  auto* inter = app.add_subcommand("interact", "pairwise interaction scores");
  add_model_flags(inter, cfg);
  add_run_flags(inter, cfg);
  inter->add_option("--features", cfg.features, "restrict to pairs of these");
  inter->add_option("--pairs", cfg.pairs, "explicit pairs a:b,c:d");
  inter->add_flag("--with-h", cfg.with_h, "also compute the H statistic");
  inter->add_option("--top", cfg.top, "rows in the printed table");

  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->add_option("--kind", cfg.kind, "linear | friedman");
  sim->add_option("--n", cfg.n, "rows")->check(CLI::PositiveNumber);
  sim->add_option("--sigma", cfg.sigma, "noise standard deviation");
  sim->add_option("--coef", cfg.coef, "linear b0,b1,b2");
  sim->add_option("--seed", cfg.seed, "generator seed");
  sim->add_option("--out", cfg.out, "output CSV");
  sim->add_option("--out-dir", cfg.out_dir, "manifest directory");

  auto* bridge = app.add_subcommand("bridge-check", "handshake with a bridge child");
  bridge->add_option("--external", cfg.external, "command line of a bridge child");
  bridge->add_option("--timeout-ms", cfg.timeout_ms, "bridge reply timeout");
  bridge->add_option("--data", cfg.data, "optional rows to send");
  bridge->add_option("--target", cfg.target, "column to drop before sending");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "fit") return cmd_fit(cfg, out, err);
    if (cfg.subcommand == "importance") return cmd_importance(cfg, out, err);
    if (cfg.subcommand == "pdp") return cmd_pdp(cfg, out, err);
    if (cfg.subcommand == "ice") return cmd_ice(cfg, out, err);
    if (cfg.subcommand == "interact") return cmd_interact(cfg, out, err);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out, err);
    return cmd_bridge_check(cfg, out, err);
  } catch (const UsageError& e) {
    err << "pdimp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpawnError& e) {
    err << "pdimp: bridge: " << e.what() << "\n";
    if (!e.diagnostics().empty()) err << e.diagnostics() << "\n";
    return kExitBridge;
  } catch (const BridgeError& e) {
    err << "pdimp: bridge: " << e.what() << "\n";
    return kExitBridge;
  } catch (const std::exception& e) {
    err << "pdimp: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace pdimp::cli
