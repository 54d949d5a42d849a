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

#include "pdimp/grid.h"

#include <algorithm>
#include <charconv>

#include "pdimp/error.h"
#include "pdimp/format.h"

namespace pdimp {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw ParameterError("invalid " + std::string(what) + " '" +
                         std::string(text) + "'");
  }
  return v;
}

}  // namespace

GridStrategy GridStrategy::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "unique" && parts.size() == 1) return unique();
  if (parts[0] == "quantile" && parts.size() == 2) {
    return quantile(parse_count(parts[1], "quantile count"));
  }
  if (parts[0] == "equidistant" && (parts.size() == 2 || parts.size() == 4)) {
    const std::size_t k = parse_count(parts[1], "point count");
    if (parts.size() == 2) return equidistant(k);
    auto lo = parse_finite_double(parts[2]);
    auto hi = parse_finite_double(parts[3]);
    if (!lo || !hi || !(*lo <= *hi)) {
      throw ParameterError("invalid equidistant range in '" +
                           std::string(text) + "'");
    }
    return equidistant(k, *lo, *hi);
  }
  throw ParameterError("unknown grid strategy '" + std::string(text) +
                       "' (expected unique, quantile:Q, equidistant:K or "
                       "equidistant:K:LO:HI)");
}

std::string GridStrategy::to_string() const {
  switch (kind) {
    case Kind::kUnique:
      return "unique";
    case Kind::kQuantile:
      return "quantile:" + std::to_string(count);
    case Kind::kEquidistant:
      if (range) {
        return "equidistant:" + std::to_string(count) + ":" +
               format_double(range->first) + ":" + format_double(range->second);
      }
      return "equidistant:" + std::to_string(count);
  }
  return {};
}

std::string GridAxis::label(std::size_t i) const {
  if (feature.is_categorical()) {
    return feature.levels[static_cast<std::size_t>(points[i])];
  }
  return format_double(points[i]);
}

std::size_t Grid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.size();
  return n;
}

std::vector<std::string> Grid::feature_names() const {
  std::vector<std::string> names;
  for (const auto& axis : axes) names.push_back(axis.feature.name);
  return names;
}

GridAxis build_axis(const Dataset& data, std::string_view feature,
                    const GridStrategy& strategy) {
  const std::size_t c = data.index_of(feature);
  GridAxis axis{data.feature(c), {}};
  if (axis.feature.is_categorical()) {
    for (std::size_t l = 0; l < axis.feature.levels.size(); ++l) {
      axis.points.push_back(static_cast<double>(l));
    }
    if (axis.points.empty()) {
      throw ParameterError("categorical feature '" + axis.feature.name +
                           "' has no levels");
    }
    return axis;
  }

  const bool explicit_range =
      strategy.kind == GridStrategy::Kind::kEquidistant && strategy.range;
  if (data.num_rows() == 0 && !explicit_range) {
    throw ParameterError("cannot build a grid for '" + axis.feature.name +
                         "' from an empty dataset");
  }
  const std::vector<double> distinct =
      data.num_rows() ? unique_sorted(data.column(c)) : std::vector<double>{};
  switch (strategy.kind) {
    case GridStrategy::Kind::kUnique:
      axis.points = distinct;
      break;
    case GridStrategy::Kind::kQuantile: {
      if (strategy.count == 0) throw ParameterError("quantile count must be positive");
      const double q = static_cast<double>(strategy.count);
      for (std::size_t i = 0; i <= strategy.count; ++i) {
        axis.points.push_back(
            interpolated_quantile(distinct, static_cast<double>(i) / q));
      }
      break;
    }
    case GridStrategy::Kind::kEquidistant: {
      if (strategy.count == 0) throw ParameterError("point count must be positive");
      const double lo = explicit_range ? strategy.range->first : distinct.front();
      const double hi = explicit_range ? strategy.range->second : distinct.back();
      const std::size_t k = strategy.count;
      if (k == 1) {
        axis.points.push_back(lo);
        break;
      }
      for (std::size_t i = 0; i < k; ++i) {
        axis.points.push_back(
            i + 1 == k ? hi
                       : lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(k - 1));
      }
      break;
    }
  }
  // Interpolation can repeat a value; the grid keeps one copy.
  axis.points.erase(std::unique(axis.points.begin(), axis.points.end()),
                    axis.points.end());
  return axis;
}

Grid build_grid(const Dataset& data, std::span<const std::string> features,
                const GridStrategy& strategy) {
  if (features.empty() || features.size() > 2) {
    throw ParameterError("a grid spans one or two features, got " +
                         std::to_string(features.size()));
  }
  if (features.size() == 2 && features[0] == features[1]) {
    throw ParameterError("a two-feature grid needs distinct features, got '" +
                         features[0] + "' twice");
  }
  Grid grid;
  grid.strategy = strategy;
  for (const auto& name : features) {
    grid.axes.push_back(build_axis(data, name, strategy));
  }
  return grid;
}

}  // namespace pdimp
