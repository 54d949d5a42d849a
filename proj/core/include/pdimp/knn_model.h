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

#ifndef PDIMP_KNN_MODEL_H_
#define PDIMP_KNN_MODEL_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "pdimp/model.h"

namespace pdimp {

// k-nearest-neighbour regression under standardized Euclidean distance.
// Features are centred by their training mean and divided by their sample
// standard deviation (1 for constant columns). Ties in distance go to the
// lower training row index.
class KnnModel : public PredictionModel {
 public:
  // `rows` is row-major raw (unstandardized) training data.
  KnnModel(std::vector<FeatureSchema> features, std::size_t k,
           std::vector<double> rows, std::vector<double> targets,
           std::vector<double> centers, std::vector<double> scales);

  std::string_view kind() const override { return "knn"; }
  const std::vector<FeatureSchema>& features() const override {
    return features_;
  }
  std::vector<double> predict(const Dataset& batch) const override;

  std::size_t k() const { return k_; }
  std::size_t num_train() const { return targets_.size(); }
  const std::vector<double>& rows() const { return rows_; }
  const std::vector<double>& targets() const { return targets_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& scales() const { return scales_; }

 private:
  std::vector<FeatureSchema> features_;
  std::size_t k_;
  std::vector<double> rows_;
  std::vector<double> targets_;
  std::vector<double> centers_;
  std::vector<double> scales_;
  std::vector<double> standardized_;
};

// Throws UnsupportedError for categorical features and ParameterError when k
// is outside [1, n_rows].
KnnModel fit_knn(const Dataset& data, std::string_view target_name,
                 std::size_t k);

}  // namespace pdimp

#endif  // PDIMP_KNN_MODEL_H_
