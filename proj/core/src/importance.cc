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

#include "pdimp/importance.h"

#include <algorithm>
#include <cmath>

#include "pdimp/error.h"
#include "pdimp/parallel.h"

namespace pdimp {
namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

std::string_view to_string(FlatnessMeasure measure) {
  switch (measure) {
    case FlatnessMeasure::kSampleSd:
      return "sd";
    case FlatnessMeasure::kMad:
      return "mad";
    case FlatnessMeasure::kRangeOver4:
      return "range4";
  }
  return {};
}

FlatnessMeasure parse_flatness_measure(std::string_view text) {
  if (text == "sd") return FlatnessMeasure::kSampleSd;
  if (text == "mad") return FlatnessMeasure::kMad;
  if (text == "range4") return FlatnessMeasure::kRangeOver4;
  throw ParameterError("unknown flatness measure '" + std::string(text) +
                       "' (expected sd, mad or range4)");
}

double flatness(std::span<const double> values, FlatnessMeasure measure) {
  const std::size_t k = values.size();
  if (k == 0) throw DegenerateError("flatness of an empty value list");
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values[0]; })) {
    if (k < 2 && measure != FlatnessMeasure::kRangeOver4) {
      throw DegenerateError("flatness measure '" +
                            std::string(to_string(measure)) +
                            "' needs at least 2 grid points");
    }
    return 0.0;
  }
  switch (measure) {
    case FlatnessMeasure::kSampleSd: {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(k);
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      return std::sqrt(ss / static_cast<double>(k - 1));
    }
    case FlatnessMeasure::kMad: {
      const double center = median_of({values.begin(), values.end()});
      std::vector<double> dev;
      dev.reserve(k);
      for (double v : values) dev.push_back(std::fabs(v - center));
      return median_of(std::move(dev));
    }
    case FlatnessMeasure::kRangeOver4: {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      return (*hi - *lo) / 4.0;
    }
  }
  return 0.0;
}

FlatnessMeasure effective_measure(FeatureKind kind, FlatnessMeasure requested) {
  return kind == FeatureKind::kCategorical ? FlatnessMeasure::kRangeOver4
                                           : requested;
}

double importance_from_pd(const PDResult& pd, FlatnessMeasure measure) {
  if (pd.grid.axes.size() != 1) {
    throw ParameterError("importance needs a single-feature partial dependence");
  }
  return flatness(pd.values,
                  effective_measure(pd.grid.axes[0].feature.kind, measure));
}

const FeatureImportance& ImportanceReport::find(std::string_view feature) const {
  for (const auto& e : entries) {
    if (e.feature == feature) return e;
  }
  throw LookupError("no importance entry for '" + std::string(feature) + "'");
}

std::vector<std::string> ImportanceReport::ranking() const {
  std::vector<std::string> names;
  for (const auto& e : entries) names.push_back(e.feature);
  return names;
}

ImportanceReport importance_all(const PredictionModel& model,
                                const Dataset& data,
                                const ImportanceOptions& options) {
  if (data.num_rows() < 2) {
    throw ParameterError("importance needs at least 2 rows, got " +
                         std::to_string(data.num_rows()));
  }
  const std::size_t p = data.num_columns();
  std::vector<FeatureImportance> entries(p);
  // Parallelism goes across features; each PD runs serially.
  PDOptions pd_options = options.pd;
  pd_options.workers = 1;
  const std::size_t workers =
      model.concurrency_safe() ? std::max<std::size_t>(options.pd.workers, 1) : 1;
  parallel_for(p, workers, [&](std::size_t c, std::size_t) {
    const FeatureSchema& f = data.feature(c);
    FeatureImportance& entry = entries[c];
    entry.feature = f.name;
    entry.measure = effective_measure(f.kind, options.measure);
    const std::vector<double> distinct = unique_sorted(data.column(c));
    if (distinct.size() < 2) {
      entry.degenerate = true;
      entry.grid_size = distinct.size();
      entry.score = 0.0;
      return;
    }
    Grid grid;
    grid.strategy = options.grid;
    grid.axes.push_back(build_axis(data, f.name, options.grid));
    const PDResult pd = partial_dependence(model, data, grid, pd_options);
    entry.grid_size = grid.size();
    entry.score = importance_from_pd(pd, options.measure);
  });
  std::stable_sort(entries.begin(), entries.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.score > b.score;
                   });
  return ImportanceReport{std::move(entries)};
}

double theoretical_uniform_sd(double beta) {
  return std::fabs(beta) / std::sqrt(12.0);
}

}  // namespace pdimp
