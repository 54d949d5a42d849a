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

#ifndef PDIMP_IMPORTANCE_H_
#define PDIMP_IMPORTANCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdimp/dataset.h"
#include "pdimp/grid.h"
#include "pdimp/model.h"
#include "pdimp/partial_dependence.h"

namespace pdimp {

// Spread statistic applied to partial dependence values.
//   kSampleSd   sqrt(sum (v - mean)^2 / (k - 1))
//   kMad        median |v - median(v)|  (unscaled)
//   kRangeOver4 (max - min) / 4
// Categorical features always use kRangeOver4.
enum class FlatnessMeasure { kSampleSd, kMad, kRangeOver4 };

std::string_view to_string(FlatnessMeasure measure);
// "sd", "mad", "range4".
FlatnessMeasure parse_flatness_measure(std::string_view text);

// Throws DegenerateError when kSampleSd or kMad get fewer than two values.
double flatness(std::span<const double> values, FlatnessMeasure measure);

// The measure actually applied to a feature of the given kind.
FlatnessMeasure effective_measure(FeatureKind kind, FlatnessMeasure requested);

// Importance of the single feature of `pd`.
double importance_from_pd(const PDResult& pd, FlatnessMeasure measure);

struct FeatureImportance {
  std::string feature;
  double score = 0.0;
  FlatnessMeasure measure = FlatnessMeasure::kSampleSd;
  std::size_t grid_size = 0;
  // Single distinct training value: score forced to 0 without a PD.
  bool degenerate = false;
};

// Entries sorted by descending score; ties keep dataset column order.
struct ImportanceReport {
  std::vector<FeatureImportance> entries;

  const FeatureImportance& find(std::string_view feature) const;
  std::vector<std::string> ranking() const;
};

struct ImportanceOptions {
  GridStrategy grid = GridStrategy::unique();
  FlatnessMeasure measure = FlatnessMeasure::kSampleSd;
  // Workers spread over features; aggregator is applied at every grid point.
  PDOptions pd;
};

// Partial dependence and flatness for every column of `data`.
ImportanceReport importance_all(const PredictionModel& model,
                                const Dataset& data,
                                const ImportanceOptions& options = {});

// Population sd of the true partial dependence beta * x for x ~ U(0, 1):
// |beta| / sqrt(12).
double theoretical_uniform_sd(double beta);

}  // namespace pdimp

#endif  // PDIMP_IMPORTANCE_H_
