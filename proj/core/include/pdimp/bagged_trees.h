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

#ifndef PDIMP_BAGGED_TREES_H_
#define PDIMP_BAGGED_TREES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pdimp/model.h"

namespace pdimp {

struct TreeParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 6;
  std::size_t min_leaf = 5;
  std::uint64_t seed = 1;
  // Fit each tree on a bootstrap resample; off means every tree sees the
  // training rows as given.
  bool bootstrap = true;
};

// A node of a binary regression tree. Internal nodes send a row left when
// x[feature] <= threshold (continuous) or when left_levels[level] is set
// (categorical). Leaves have feature == -1.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::vector<bool> left_levels;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
  std::size_t count = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes);

  // `row` holds one value per model feature, in model feature order.
  double predict_row(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

// Fits a single tree on rows given by `sample` (indices into x/y, repeats
// allowed). Splits maximize the reduction in squared error; thresholds are
// midpoints between consecutive distinct values; ties go to the lower feature
// index, then the lower threshold. Categorical features use subset splits
// found by ordering levels by mean response.
RegressionTree fit_tree(const Dataset& x, std::span<const double> y,
                        std::span<const std::size_t> sample,
                        std::size_t max_depth, std::size_t min_leaf);

// Mean of the predictions of independently fitted trees.
class BaggedTreesModel : public PredictionModel {
 public:
  BaggedTreesModel(std::vector<FeatureSchema> features, TreeParams params,
                   std::vector<RegressionTree> trees);

  std::string_view kind() const override { return "bagged"; }
  const std::vector<FeatureSchema>& features() const override {
    return features_;
  }
  std::vector<double> predict(const Dataset& batch) const override;

  const TreeParams& params() const { return params_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

 private:
  std::vector<FeatureSchema> features_;
  TreeParams params_;
  std::vector<RegressionTree> trees_;

  // Flattened copy of all trees for prediction. Internal nodes keep the
  // threshold in `value`; categorical splits index into level_masks_.
  // Leaves are self-loops.
  struct FlatNode {
    std::int32_t feature = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t levels = -1;
    std::int32_t n_levels = 0;
    double value = 0.0;
  };
  std::vector<FlatNode> flat_;
  std::vector<std::int32_t> roots_;
  std::vector<std::size_t> depths_;
  std::vector<std::uint8_t> level_masks_;
};

// Tree t draws its bootstrap sample from Rng(seed, t), so the fit is
// bit-reproducible for any worker count. Throws ParameterError when
// n_rows < 2 * min_leaf or a parameter is zero.
BaggedTreesModel fit_bagged_trees(const Dataset& data,
                                  std::string_view target_name,
                                  const TreeParams& params,
                                  std::size_t workers = 1);

}  // namespace pdimp

#endif  // PDIMP_BAGGED_TREES_H_
