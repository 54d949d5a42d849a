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

#include "pdimp/model.h"

#include "pdimp/error.h"

namespace pdimp {

std::vector<std::string> PredictionModel::feature_names() const {
  std::vector<std::string> names;
  for (const auto& f : features()) names.push_back(f.name);
  return names;
}

std::vector<std::size_t> bind_columns(
    const Dataset& batch, const std::vector<FeatureSchema>& expected) {
  std::vector<std::size_t> columns;
  columns.reserve(expected.size());
  std::vector<std::string> missing;
  std::vector<std::string> mismatched;
  std::vector<bool> used(batch.num_columns(), false);
  for (const auto& f : expected) {
    auto c = batch.find(f.name);
    if (!c) {
      missing.push_back(f.name);
      continue;
    }
    used[*c] = true;
    if (batch.feature(*c) != f) mismatched.push_back(f.name);
    columns.push_back(*c);
  }
  std::vector<std::string> extra;
  for (std::size_t c = 0; c < batch.num_columns(); ++c) {
    if (!used[c]) extra.push_back(batch.feature(c).name);
  }
  if (missing.empty() && extra.empty() && mismatched.empty()) return columns;

  auto join = [](const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
  };
  std::string msg = "batch schema does not match model features";
  if (!missing.empty()) msg += "; missing: " + join(missing);
  if (!extra.empty()) msg += "; extra: " + join(extra);
  if (!mismatched.empty()) msg += "; kind/levels differ: " + join(mismatched);
  throw ContractError(msg);
}

}  // namespace pdimp
