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

#include "pdimp/knn_model.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pdimp/error.h"

namespace pdimp {

KnnModel::KnnModel(std::vector<FeatureSchema> features, std::size_t k,
                   std::vector<double> rows, std::vector<double> targets,
                   std::vector<double> centers, std::vector<double> scales)
    : features_(std::move(features)),
      k_(k),
      rows_(std::move(rows)),
      targets_(std::move(targets)),
      centers_(std::move(centers)),
      scales_(std::move(scales)) {
  const std::size_t p = features_.size();
  for (const auto& f : features_) {
    if (!f.is_continuous()) {
      throw UnsupportedError("k-NN supports continuous features only; '" +
                             f.name + "' is categorical");
    }
  }
  if (k_ < 1 || k_ > targets_.size()) {
    throw ParameterError("k = " + std::to_string(k_) + " is outside [1, " +
                         std::to_string(targets_.size()) + "]");
  }
  if (rows_.size() != targets_.size() * p || centers_.size() != p ||
      scales_.size() != p) {
    throw ParameterError("k-NN model arrays have inconsistent sizes");
  }
  for (double s : scales_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ParameterError("k-NN scale factors must be positive and finite");
    }
  }
  standardized_.resize(rows_.size());
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      standardized_[i * p + j] = (rows_[i * p + j] - centers_[j]) / scales_[j];
    }
  }
}

std::vector<double> KnnModel::predict(const Dataset& batch) const {
  const auto columns = bind_columns(batch, features_);
  const std::size_t p = features_.size();
  const std::size_t n_train = targets_.size();
  std::vector<double> out(batch.num_rows());
  std::vector<double> query(p);
  std::vector<std::pair<double, std::size_t>> dist(n_train);
  for (std::size_t r = 0; r < batch.num_rows(); ++r) {
    for (std::size_t j = 0; j < p; ++j) {
      query[j] = (batch.at(r, columns[j]) - centers_[j]) / scales_[j];
    }
    for (std::size_t i = 0; i < n_train; ++i) {
      const double* row = &standardized_[i * p];
      double d = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double diff = row[j] - query[j];
        d += diff * diff;
      }
      dist[i] = {d, i};
    }
    // Pairs compare by distance, then by row index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_),
                      dist.end());
    double sum = 0.0;
    for (std::size_t m = 0; m < k_; ++m) sum += targets_[dist[m].second];
    out[r] = sum / static_cast<double>(k_);
  }
  return out;
}

KnnModel fit_knn(const Dataset& data, std::string_view target_name,
                 std::size_t k) {
  auto [x, y] = split_target(data, target_name);
  const std::size_t n = x.num_rows();
  const std::size_t p = x.num_columns();
  for (const auto& f : x.schema()) {
    if (!f.is_continuous()) {
      throw UnsupportedError("k-NN supports continuous features only; '" +
                             f.name + "' is categorical");
    }
  }
  if (k < 1 || k > n) {
    throw ParameterError("k = " + std::to_string(k) + " is outside [1, " +
                         std::to_string(n) + "]");
  }
  std::vector<double> centers(p), scales(p), rows(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    auto col = x.column(j);
    double sum = 0.0;
    for (double v : col) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    centers[j] = mean;
    scales[j] = sd > 0.0 ? sd : 1.0;
    for (std::size_t i = 0; i < n; ++i) rows[i * p + j] = col[i];
  }
  return KnnModel(x.schema(), k, std::move(rows), std::move(y),
                  std::move(centers), std::move(scales));
}

}  // namespace pdimp
