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

#ifndef PDIMP_LINEAR_MODEL_H_
#define PDIMP_LINEAR_MODEL_H_

#include <string>
#include <string_view>
#include <vector>

#include "pdimp/model.h"

namespace pdimp {

// y = intercept + sum_j coefficients[j] * design_j(x). Continuous features
// contribute one design column each; a categorical feature with K levels
// contributes K - 1 indicator columns (the first level is the reference).
class LinearModel : public PredictionModel {
 public:
  LinearModel(std::vector<FeatureSchema> features, double intercept,
              std::vector<double> coefficients);

  std::string_view kind() const override { return "linear"; }
  const std::vector<FeatureSchema>& features() const override {
    return features_;
  }
  std::vector<double> predict(const Dataset& batch) const override;

  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  // Names of the design columns, "x" for continuous and "x=level" for
  // indicators.
  std::vector<std::string> design_column_names() const;

 private:
  std::vector<FeatureSchema> features_;
  double intercept_;
  std::vector<double> coefficients_;
};

// Number of design columns (excluding the intercept) the features expand to.
std::size_t design_width(const std::vector<FeatureSchema>& features);

// Ordinary least squares of `target_name` on every other column. Throws
// LookupError for a missing target, ParameterError when there are not more
// rows than design columns, and SingularityError naming the collinear columns
// for a rank-deficient design.
LinearModel fit_linear(const Dataset& data, std::string_view target_name);

}  // namespace pdimp

#endif  // PDIMP_LINEAR_MODEL_H_
