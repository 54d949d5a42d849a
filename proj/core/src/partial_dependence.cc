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

#include "pdimp/partial_dependence.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "pdimp/error.h"
#include "pdimp/format.h"
#include "pdimp/parallel.h"

namespace pdimp {

Aggregator Aggregator::trimmed(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw ParameterError("trim fraction must lie in [0, 0.5), got " +
                         format_double(alpha));
  }
  return {Kind::kTrimmedMean, alpha};
}

Aggregator Aggregator::parse(std::string_view text) {
  if (text == "mean") return mean();
  if (text == "median") return median();
  if (text.starts_with("trimmed:")) {
    auto alpha = parse_finite_double(text.substr(8));
    if (!alpha) {
      throw ParameterError("invalid trim fraction in '" + std::string(text) + "'");
    }
    return trimmed(*alpha);
  }
  throw ParameterError("unknown aggregator '" + std::string(text) +
                       "' (expected mean, median or trimmed:ALPHA)");
}

std::string Aggregator::to_string() const {
  switch (kind) {
    case Kind::kMean:
      return "mean";
    case Kind::kMedian:
      return "median";
    case Kind::kTrimmedMean:
      return "trimmed:" + format_double(trim);
  }
  return {};
}

double Aggregator::apply(std::span<const double> predictions) const {
  const std::size_t n = predictions.size();
  if (n == 0) throw ParameterError("cannot aggregate zero predictions");
  if (kind == Kind::kMean) {
    double sum = 0.0;
    for (double p : predictions) sum += p;
    return sum / static_cast<double>(n);
  }
  std::vector<double> sorted(predictions.begin(), predictions.end());
  std::sort(sorted.begin(), sorted.end());
  if (kind == Kind::kMedian) {
    return n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  }
  const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(n)));
  double sum = 0.0;
  for (std::size_t i = cut; i < n - cut; ++i) sum += sorted[i];
  return sum / static_cast<double>(n - 2 * cut);
}

std::vector<double> PDResult::slice_axis0(std::size_t j) const {
  const std::size_t ki = grid.axes.at(0).size();
  const std::size_t kj = grid.axes.at(1).size();
  std::vector<double> out(ki);
  for (std::size_t i = 0; i < ki; ++i) out[i] = values[i * kj + j];
  return out;
}

std::vector<double> PDResult::slice_axis1(std::size_t i) const {
  const std::size_t kj = grid.axes.at(1).size();
  return std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(i * kj),
                             values.begin() + static_cast<std::ptrdiff_t>((i + 1) * kj));
}

std::vector<double> ICEResult::column_means() const {
  const std::size_t k = grid.size();
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) sum += curves[r * k + j];
    out[j] = sum / static_cast<double>(n_rows);
  }
  return out;
}

namespace {

using Consumer =
    std::function<void(std::size_t point, std::span<const double> predictions)>;

std::string describe_point(const Dataset& data,
                           std::span<const std::size_t> columns,
                           std::span<const double> values) {
  std::string out;
  for (std::size_t a = 0; a < columns.size(); ++a) {
    const FeatureSchema& f = data.feature(columns[a]);
    if (a) out += ", ";
    out += f.name + "=" +
           (f.is_categorical() ? f.levels[static_cast<std::size_t>(values[a])]
                               : format_double(values[a]));
  }
  return out;
}

// Scores every training row at every point. `points` is row-major with
// columns.size() values per point. consume() is called once per point, from
// any thread, with that point's n predictions in row order.
void evaluate_points(const PredictionModel& model, const Dataset& data,
                     std::span<const std::size_t> columns,
                     std::span<const double> points, const PDOptions& options,
                     const Consumer& consume) {
  const std::size_t n = data.num_rows();
  const std::size_t stride = columns.size();
  const std::size_t n_points = stride ? points.size() / stride : 0;
  if (n == 0) throw ParameterError("partial dependence needs at least one row");
  for (std::size_t a = 0; a < stride; ++a) {
    const FeatureSchema& f = data.feature(columns[a]);
    for (std::size_t p = 0; p < n_points; ++p) {
      const double v = points[p * stride + a];
      if (!std::isfinite(v) ||
          (f.is_categorical() &&
           (v < 0 || v != std::floor(v) ||
            v >= static_cast<double>(f.levels.size())))) {
        throw ParameterError("invalid grid value for '" + f.name + "'");
      }
    }
  }

  auto check = [&](std::size_t p, std::span<const double> preds) {
    if (preds.size() != n) {
      throw ContractError("model returned " + std::to_string(preds.size()) +
                          " predictions for " + std::to_string(n) + " rows");
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (!std::isfinite(preds[r])) {
        throw NumericError(
            "non-finite prediction at grid point (" +
            describe_point(data, columns, points.subspan(p * stride, stride)) +
            ") for row " + std::to_string(r + 1));
      }
    }
    consume(p, preds);
  };

  if (model.concurrency_safe()) {
    const std::size_t workers = std::max<std::size_t>(options.workers, 1);
    std::vector<std::optional<Dataset>> scratch(workers);
    parallel_for(n_points, workers, [&](std::size_t p, std::size_t w) {
      if (!scratch[w]) scratch[w].emplace(data);
      Dataset& copy = *scratch[w];
      for (std::size_t a = 0; a < stride; ++a) {
        copy.overwrite_column(columns[a], points[p * stride + a]);
      }
      const std::vector<double> preds = model.predict(copy);
      check(p, preds);
    });
    return;
  }

  // Serialized model: several grid points per request.
  const std::size_t per_chunk =
      std::max<std::size_t>(1, options.max_batch_rows / n);
  for (std::size_t first = 0; first < n_points; first += per_chunk) {
    const std::size_t last = std::min(n_points, first + per_chunk);
    std::vector<Dataset> parts;
    parts.reserve(last - first);
    for (std::size_t p = first; p < last; ++p) {
      Dataset copy = data;
      for (std::size_t a = 0; a < stride; ++a) {
        copy.overwrite_column(columns[a], points[p * stride + a]);
      }
      parts.push_back(std::move(copy));
    }
    const Dataset batch = Dataset::concat(parts);
    parts.clear();
    const std::vector<double> preds = model.predict(batch);
    if (preds.size() != batch.num_rows()) {
      throw ContractError("model returned " + std::to_string(preds.size()) +
                          " predictions for " +
                          std::to_string(batch.num_rows()) + " rows");
    }
    for (std::size_t p = first; p < last; ++p) {
      check(p, std::span<const double>(preds).subspan((p - first) * n, n));
    }
  }
}

std::vector<std::size_t> grid_columns(const Dataset& data, const Grid& grid) {
  std::vector<std::size_t> columns;
  for (const auto& axis : grid.axes) {
    const std::size_t c = data.index_of(axis.feature.name);
    if (data.feature(c) != axis.feature) {
      throw ContractError("grid feature '" + axis.feature.name +
                          "' does not match the dataset schema");
    }
    columns.push_back(c);
  }
  return columns;
}

std::vector<double> grid_points(const Grid& grid) {
  std::vector<double> points;
  if (grid.axes.size() == 1) {
    points = grid.axes[0].points;
  } else {
    for (double a : grid.axes[0].points) {
      for (double b : grid.axes[1].points) {
        points.push_back(a);
        points.push_back(b);
      }
    }
  }
  return points;
}

void check_grid(const Grid& grid) {
  if (grid.axes.empty() || grid.axes.size() > 2) {
    throw ParameterError("partial dependence grids span one or two features");
  }
  if (grid.axes.size() == 2 && grid.axes[0].feature.name == grid.axes[1].feature.name) {
    throw ParameterError("joint partial dependence needs two distinct features");
  }
  for (const auto& axis : grid.axes) {
    if (axis.points.empty()) {
      throw ParameterError("grid for '" + axis.feature.name + "' is empty");
    }
  }
}

}  // namespace

double baseline_prediction(const PredictionModel& model, const Dataset& data) {
  const std::vector<double> preds = model.predict(data);
  return Aggregator::mean().apply(preds);
}

PDResult partial_dependence(const PredictionModel& model, const Dataset& data,
                            const Grid& grid, const PDOptions& options) {
  check_grid(grid);
  const auto columns = grid_columns(data, grid);
  const auto points = grid_points(grid);
  PDResult result;
  result.grid = grid;
  result.values.assign(grid.size(), 0.0);
  result.n_train = data.num_rows();
  result.aggregator = options.aggregator;
  evaluate_points(model, data, columns, points, options,
                  [&](std::size_t p, std::span<const double> preds) {
                    result.values[p] = options.aggregator.apply(preds);
                  });
  result.baseline = baseline_prediction(model, data);
  return result;
}

PDResult joint_partial_dependence(const PredictionModel& model,
                                  const Dataset& data, const Grid& grid,
                                  const PDOptions& options) {
  if (grid.axes.size() != 2) {
    throw ParameterError("joint partial dependence needs a two-feature grid");
  }
  return partial_dependence(model, data, grid, options);
}

ICEResult ice_curves(const PredictionModel& model, const Dataset& data,
                     const Grid& grid, const PDOptions& options) {
  check_grid(grid);
  if (grid.axes.size() != 1) {
    throw UnsupportedError("ICE curves are defined for single-feature grids");
  }
  const auto columns = grid_columns(data, grid);
  const std::size_t k = grid.size();
  const std::size_t n = data.num_rows();
  ICEResult result;
  result.grid = grid;
  result.n_rows = n;
  result.curves.assign(n * k, 0.0);
  evaluate_points(model, data, columns, grid.axes[0].points, options,
                  [&](std::size_t p, std::span<const double> preds) {
                    for (std::size_t r = 0; r < n; ++r) {
                      result.curves[r * k + p] = preds[r];
                    }
                  });
  return result;
}

std::vector<double> partial_dependence_at(const PredictionModel& model,
                                          const Dataset& data,
                                          std::span<const std::string> features,
                                          std::span<const double> points,
                                          const PDOptions& options) {
  if (features.empty()) throw ParameterError("no features given");
  if (points.size() % features.size() != 0) {
    throw ParameterError("point list length is not a multiple of the feature count");
  }
  std::vector<std::size_t> columns;
  for (const auto& name : features) columns.push_back(data.index_of(name));
  std::vector<double> values(points.size() / features.size());
  evaluate_points(model, data, columns, points, options,
                  [&](std::size_t p, std::span<const double> preds) {
                    values[p] = options.aggregator.apply(preds);
                  });
  return values;
}

}  // namespace pdimp
