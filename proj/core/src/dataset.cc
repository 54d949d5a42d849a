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

#include "pdimp/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pdimp/error.h"
#include "pdimp/format.h"

namespace pdimp {

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kContinuous ? "continuous" : "categorical";
}

FeatureSchema FeatureSchema::continuous(std::string name) {
  return FeatureSchema{std::move(name), FeatureKind::kContinuous, {}};
}

FeatureSchema FeatureSchema::categorical(std::string name,
                                         std::vector<std::string> levels) {
  return FeatureSchema{std::move(name), FeatureKind::kCategorical,
                       std::move(levels)};
}

std::optional<std::size_t> FeatureSchema::level_index(
    std::string_view label) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == label) return i;
  }
  return std::nullopt;
}

void FeatureSchema::validate(bool allow_empty_levels) const {
  if (name.empty()) throw ParameterError("feature name must not be empty");
  if (is_continuous()) {
    if (!levels.empty()) {
      throw ParameterError("continuous feature '" + name +
                           "' must not carry levels");
    }
    return;
  }
  if (levels.empty() && !allow_empty_levels) {
    throw ParameterError("categorical feature '" + name + "' has no levels");
  }
  std::set<std::string_view> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level).second) {
      throw ParameterError("categorical feature '" + name +
                           "' has duplicate level '" + level + "'");
    }
  }
}

Dataset::Dataset(std::vector<FeatureSchema> schema,
                 std::vector<std::vector<double>> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (schema_.size() != columns_.size()) {
    throw ParameterError("schema has " + std::to_string(schema_.size()) +
                         " features but " + std::to_string(columns_.size()) +
                         " columns were supplied");
  }
  num_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::set<std::string_view> names;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    const FeatureSchema& f = schema_[c];
    f.validate(/*allow_empty_levels=*/num_rows_ == 0);
    if (!names.insert(f.name).second) {
      throw ParameterError("duplicate feature name '" + f.name + "'");
    }
    if (columns_[c].size() != num_rows_) {
      throw ParameterError("column '" + f.name + "' has " +
                           std::to_string(columns_[c].size()) +
                           " rows, expected " + std::to_string(num_rows_));
    }
    for (std::size_t r = 0; r < num_rows_; ++r) {
      const double v = columns_[c][r];
      if (!std::isfinite(v)) {
        throw NumericError("non-finite value in column '" + f.name +
                           "' at row " + std::to_string(r + 1));
      }
      if (f.is_categorical() &&
          (v < 0 || v != std::floor(v) ||
           v >= static_cast<double>(f.levels.size()))) {
        throw ParameterError("level index out of range in column '" + f.name +
                             "' at row " + std::to_string(r + 1));
      }
    }
  }
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(schema_.size());
  for (const auto& f : schema_) names.push_back(f.name);
  return names;
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].name == name) return c;
  }
  return std::nullopt;
}

std::size_t Dataset::index_of(std::string_view name) const {
  if (auto c = find(name)) return *c;
  throw LookupError("unknown feature '" + std::string(name) + "'");
}

std::string Dataset::cell_text(std::size_t row, std::size_t col) const {
  const double v = columns_[col][row];
  if (schema_[col].is_categorical()) {
    return schema_[col].levels[static_cast<std::size_t>(v)];
  }
  return format_double(v);
}

Dataset Dataset::select(std::span<const std::string> names) const {
  std::vector<FeatureSchema> schema;
  std::vector<std::vector<double>> columns;
  for (const auto& name : names) {
    const std::size_t c = index_of(name);
    schema.push_back(schema_[c]);
    columns.push_back(columns_[c]);
  }
  Dataset out;
  out.schema_ = std::move(schema);
  out.columns_ = std::move(columns);
  out.num_rows_ = names.empty() ? 0 : num_rows_;
  return out;
}

Dataset Dataset::drop(std::string_view name) const {
  const std::size_t skip = index_of(name);
  Dataset out = *this;
  out.schema_.erase(out.schema_.begin() + static_cast<std::ptrdiff_t>(skip));
  out.columns_.erase(out.columns_.begin() + static_cast<std::ptrdiff_t>(skip));
  if (out.columns_.empty()) out.num_rows_ = 0;
  return out;
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  out.schema_ = schema_;
  out.columns_.resize(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out.columns_[c].reserve(rows.size());
    for (std::size_t r : rows) out.columns_[c].push_back(columns_[c].at(r));
  }
  out.num_rows_ = columns_.empty() ? 0 : rows.size();
  return out;
}

void Dataset::overwrite_column(std::size_t col, double value) {
  std::fill(columns_[col].begin(), columns_[col].end(), value);
}

Dataset Dataset::concat(std::span<const Dataset> parts) {
  if (parts.empty()) return Dataset();
  Dataset out;
  out.schema_ = parts.front().schema_;
  out.columns_.resize(out.schema_.size());
  std::size_t total = 0;
  for (const auto& part : parts) {
    if (part.schema_ != out.schema_) {
      throw ContractError("cannot concatenate datasets with different schemas");
    }
    total += part.num_rows_;
  }
  for (std::size_t c = 0; c < out.columns_.size(); ++c) {
    out.columns_[c].reserve(total);
    for (const auto& part : parts) {
      out.columns_[c].insert(out.columns_[c].end(), part.columns_[c].begin(),
                             part.columns_[c].end());
    }
  }
  out.num_rows_ = out.columns_.empty() ? 0 : total;
  return out;
}

std::pair<Dataset, std::vector<double>> split_target(const Dataset& data,
                                                     std::string_view target) {
  const std::size_t c = data.index_of(target);
  if (data.feature(c).is_categorical()) {
    throw UnsupportedError("target column '" + std::string(target) +
                           "' is categorical; a numeric target is required");
  }
  auto y = data.column(c);
  return {data.drop(target), std::vector<double>(y.begin(), y.end())};
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ParameterError("quantile of an empty sample");
  p = std::clamp(p, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> unique_sorted(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ColumnSummary::ColumnSummary(double mean, std::vector<double> sorted_values)
    : mean_(mean), sorted_(std::move(sorted_values)) {
  unique_ = sorted_;
  unique_.erase(std::unique(unique_.begin(), unique_.end()), unique_.end());
}

ColumnSummary summarize(const Dataset& data, std::string_view feature) {
  const std::size_t c = data.index_of(feature);
  if (data.feature(c).is_categorical()) {
    throw UnsupportedError("feature '" + std::string(feature) +
                           "' is categorical; its summary is its level list");
  }
  if (data.num_rows() == 0) {
    throw ParameterError("cannot summarize feature '" + std::string(feature) +
                         "' of an empty dataset");
  }
  auto values = data.column(c);
  double sum = 0.0;
  for (double v : values) sum += v;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return ColumnSummary(sum / static_cast<double>(values.size()),
                       std::move(sorted));
}

}  // namespace pdimp
