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

#ifndef PDIMP_PARTIAL_DEPENDENCE_H_
#define PDIMP_PARTIAL_DEPENDENCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdimp/dataset.h"
#include "pdimp/grid.h"
#include "pdimp/model.h"

namespace pdimp {

// How the n predictions at one grid point are reduced to a single value.
// The mean is the plain partial dependence estimator; the median and the
// trimmed mean are robust alternatives.
struct Aggregator {
  enum class Kind { kMean, kMedian, kTrimmedMean };
  Kind kind = Kind::kMean;
  // Fraction trimmed from each tail, in [0, 0.5).
  double trim = 0.0;

  static Aggregator mean() { return {}; }
  static Aggregator median() { return {Kind::kMedian, 0.0}; }
  static Aggregator trimmed(double alpha);

  // "mean", "median", "trimmed:0.1".
  static Aggregator parse(std::string_view text);
  std::string to_string() const;

  // The mean is a left-to-right sum in row order divided by n.
  double apply(std::span<const double> predictions) const;

  friend bool operator==(const Aggregator&, const Aggregator&) = default;
};

struct PDOptions {
  // Grid points are spread over this many threads when the model allows
  // concurrent prediction. Results do not depend on it.
  std::size_t workers = 1;
  Aggregator aggregator;
  // Models that are not concurrency-safe receive several grid points per
  // predict() call, up to this many rows per call.
  std::size_t max_batch_rows = 1 << 16;
};

struct PDResult {
  Grid grid;
  // One value per grid cell, row-major for two-feature grids.
  std::vector<double> values;
  std::size_t n_train = 0;
  // Mean prediction over the unmodified training rows.
  double baseline = 0.0;
  Aggregator aggregator;

  // Values along axis 0 with axis 1 fixed at point j (two-feature grids).
  std::vector<double> slice_axis0(std::size_t j) const;
  // Values along axis 1 with axis 0 fixed at point i (two-feature grids).
  std::vector<double> slice_axis1(std::size_t i) const;
};

struct ICEResult {
  Grid grid;
  std::size_t n_rows = 0;
  // Row-major n_rows x grid.size() matrix: curves[i * k + j] is the
  // prediction for training row i with the feature set to grid point j.
  std::vector<double> curves;

  double at(std::size_t row, std::size_t point) const {
    return curves[row * grid.size() + point];
  }
  // Per-point mean over rows, summed in row order.
  std::vector<double> column_means() const;
};

// For every grid cell: overwrite the grid feature(s) of every training row
// with the cell's value(s), score all rows, aggregate. `data` must hold
// exactly the model's features. Throws NumericError naming the grid point
// when the model returns a non-finite prediction.
PDResult partial_dependence(const PredictionModel& model, const Dataset& data,
                            const Grid& grid, const PDOptions& options = {});

// partial_dependence() restricted to two-feature grids over distinct
// features; throws ParameterError otherwise.
PDResult joint_partial_dependence(const PredictionModel& model,
                                  const Dataset& data, const Grid& grid,
                                  const PDOptions& options = {});

// Per-row curves for a single-feature grid; throws UnsupportedError for two
// features. Column means equal partial_dependence() values exactly.
ICEResult ice_curves(const PredictionModel& model, const Dataset& data,
                     const Grid& grid, const PDOptions& options = {});

// Partial dependence at arbitrary points. `points` is row-major with one
// value per entry of `features` (level indices for categorical features).
std::vector<double> partial_dependence_at(const PredictionModel& model,
                                          const Dataset& data,
                                          std::span<const std::string> features,
                                          std::span<const double> points,
                                          const PDOptions& options = {});

// Mean prediction over the unmodified rows of `data`.
double baseline_prediction(const PredictionModel& model, const Dataset& data);

}  // namespace pdimp

#endif  // PDIMP_PARTIAL_DEPENDENCE_H_
