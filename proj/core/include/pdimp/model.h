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

#ifndef PDIMP_MODEL_H_
#define PDIMP_MODEL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pdimp/dataset.h"

namespace pdimp {

// Uniform scoring contract. Implementations must be deterministic and
// row-independent: the prediction for row i depends only on row i.
class PredictionModel {
 public:
  virtual ~PredictionModel() = default;

  // Short tag such as "linear" or "expression".
  virtual std::string_view kind() const = 0;

  // Features the model reads, in its own order, with kinds and level tables.
  virtual const std::vector<FeatureSchema>& features() const = 0;

  // One prediction per batch row. Throws ContractError when the batch schema
  // does not match features().
  virtual std::vector<double> predict(const Dataset& batch) const = 0;

  // Whether predict() may be called from several threads at once.
  virtual bool concurrency_safe() const { return true; }

  std::vector<std::string> feature_names() const;
};

// Maps each expected feature to its column in `batch`. The batch must hold
// exactly the expected features (any order) with matching kinds and level
// tables; otherwise throws ContractError listing missing and extra features.
std::vector<std::size_t> bind_columns(const Dataset& batch,
                                      const std::vector<FeatureSchema>& expected);

}  // namespace pdimp

#endif  // PDIMP_MODEL_H_
