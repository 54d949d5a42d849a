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

#ifndef PDIMP_DATASET_H_
#define PDIMP_DATASET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdimp {

enum class FeatureKind { kContinuous, kCategorical };

std::string_view to_string(FeatureKind kind);

// Per-column metadata. Categorical columns carry their level table; cell
// values of a categorical column are indices into `levels`.
struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> levels;

  static FeatureSchema continuous(std::string name);
  static FeatureSchema categorical(std::string name,
                                   std::vector<std::string> levels);

  bool is_continuous() const { return kind == FeatureKind::kContinuous; }
  bool is_categorical() const { return kind == FeatureKind::kCategorical; }

  // Index of `label` in `levels`, or nullopt.
  std::optional<std::size_t> level_index(std::string_view label) const;

  // Throws ParameterError when the kind/levels invariants do not hold. Empty
  // level tables are accepted only when `allow_empty_levels` is set (used for
  // zero-row datasets).
  void validate(bool allow_empty_levels = false) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Immutable columnar table. Every column is stored as doubles: real values for
// continuous features, level indices for categorical ones. The target is not
// special; it is an ordinary numeric column extracted with split_target().
class Dataset {
 public:
  Dataset() = default;
  // Validates lengths, finiteness and level ranges; throws ParameterError or
  // NumericError.
  Dataset(std::vector<FeatureSchema> schema,
          std::vector<std::vector<double>> columns);

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_columns() const { return schema_.size(); }

  const std::vector<FeatureSchema>& schema() const { return schema_; }
  const FeatureSchema& feature(std::size_t col) const { return schema_[col]; }
  std::vector<std::string> feature_names() const;

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws LookupError.
  std::size_t index_of(std::string_view name) const;

  std::span<const double> column(std::size_t col) const { return columns_[col]; }
  std::span<const double> column(std::string_view name) const {
    return columns_[index_of(name)];
  }
  double at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

  // Text form of a cell: shortest round-trip decimal or the level label.
  std::string cell_text(std::size_t row, std::size_t col) const;

  // Copy restricted to the named columns, in the given order.
  Dataset select(std::span<const std::string> names) const;
  // Copy without the named column. Throws LookupError.
  Dataset drop(std::string_view name) const;
  // Copy restricted to the listed rows, in the given order.
  Dataset take_rows(std::span<const std::size_t> rows) const;

  // Sets every cell of `col` to `value`. Only for privately owned copies (the
  // partial dependence engine perturbs its own copy of the training data).
  void overwrite_column(std::size_t col, double value);
  // Mutable access for privately owned copies.
  std::span<double> mutable_column(std::size_t col) { return columns_[col]; }

  // Row-wise concatenation of datasets with identical schemas.
  static Dataset concat(std::span<const Dataset> parts);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<FeatureSchema> schema_;
  std::vector<std::vector<double>> columns_;
  std::size_t num_rows_ = 0;
};

// Splits off the numeric target column. Throws LookupError when absent and
// UnsupportedError when the column is categorical.
std::pair<Dataset, std::vector<double>> split_target(const Dataset& data,
                                                     std::string_view target);

// Quantile of ascending `sorted` values by linear interpolation between the
// closest order statistics (h = (n - 1) p). `p` is clamped to [0, 1].
double interpolated_quantile(std::span<const double> sorted, double p);

// Sorted distinct values of a column.
std::vector<double> unique_sorted(std::span<const double> values);

class ColumnSummary {
 public:
  ColumnSummary(double mean, std::vector<double> sorted_values);

  double mean() const { return mean_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  const std::vector<double>& unique_values() const { return unique_; }
  double quantile(double q) const { return interpolated_quantile(sorted_, q); }
  std::size_t count() const { return sorted_.size(); }

 private:
  double mean_;
  std::vector<double> sorted_;
  std::vector<double> unique_;
};

// Summary statistics of a continuous, non-empty column. Throws LookupError for
// unknown names, UnsupportedError for categorical columns and ParameterError
// for empty datasets.
ColumnSummary summarize(const Dataset& data, std::string_view feature);

}  // namespace pdimp

#endif  // PDIMP_DATASET_H_
