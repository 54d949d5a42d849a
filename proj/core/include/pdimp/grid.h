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

#ifndef PDIMP_GRID_H_
#define PDIMP_GRID_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdimp/dataset.h"

namespace pdimp {

// How evaluation points are chosen for a continuous feature. Categorical
// features always use their full level list.
struct GridStrategy {
  enum class Kind { kUnique, kQuantile, kEquidistant };
  Kind kind = Kind::kUnique;
  // kQuantile: number of intervals q (q + 1 points); kEquidistant: points k.
  std::size_t count = 0;
  // kEquidistant only: explicit [lo, hi] instead of the training range.
  std::optional<std::pair<double, double>> range;

  static GridStrategy unique() { return {}; }
  static GridStrategy quantile(std::size_t q) { return {Kind::kQuantile, q, {}}; }
  static GridStrategy equidistant(std::size_t k) {
    return {Kind::kEquidistant, k, {}};
  }
  static GridStrategy equidistant(std::size_t k, double lo, double hi) {
    return {Kind::kEquidistant, k, std::make_pair(lo, hi)};
  }

  // "unique", "quantile:10", "equidistant:25", "equidistant:101:0:1".
  static GridStrategy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const GridStrategy&, const GridStrategy&) = default;
};

// Evaluation points for one feature. Categorical points are level indices.
struct GridAxis {
  FeatureSchema feature;
  std::vector<double> points;

  std::size_t size() const { return points.size(); }
  // Text of point i: shortest round-trip decimal or the level label.
  std::string label(std::size_t i) const;
};

// One or two axes. Cells of a two-axis grid are laid out row-major: cell
// (i, j) has index i * axes[1].size() + j.
struct Grid {
  std::vector<GridAxis> axes;
  GridStrategy strategy;

  std::size_t size() const;
  std::vector<std::string> feature_names() const;
};

// Points of one axis. Categorical features get their full level list
// whatever the strategy. Throws ParameterError for an empty dataset (unless
// an explicit equidistant range is given) or a zero point count.
GridAxis build_axis(const Dataset& data, std::string_view feature,
                    const GridStrategy& strategy);

// Grid over one or two distinct features.
Grid build_grid(const Dataset& data, std::span<const std::string> features,
                const GridStrategy& strategy);

}  // namespace pdimp

#endif  // PDIMP_GRID_H_
