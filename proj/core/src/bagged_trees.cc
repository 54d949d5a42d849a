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

#include "pdimp/bagged_trees.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "pdimp/error.h"
#include "pdimp/parallel.h"
#include "pdimp/rng.h"

namespace pdimp {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ParameterError("a tree needs at least one node");
  const auto size = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < size; ++i) {
    const TreeNode& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    // Children follow their parent, which also rules out cycles.
    if (node.left <= i || node.right <= i || node.left >= size ||
        node.right >= size) {
      throw ParameterError("tree node has out-of-range children");
    }
  }
}

double RegressionTree::predict_row(std::span<const double> row) const {
  std::size_t i = 0;
  for (;;) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) return node.value;
    const double v = row[static_cast<std::size_t>(node.feature)];
    bool go_left;
    if (node.left_levels.empty()) {
      go_left = v <= node.threshold;
    } else {
      const auto level = static_cast<std::size_t>(v);
      go_left = level < node.left_levels.size() && node.left_levels[level];
    }
    i = static_cast<std::size_t>(go_left ? node.left : node.right);
  }
}

std::size_t RegressionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const TreeNode& node = nodes_[i];
    if (!node.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(node.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(node.right), d + 1);
    }
  }
  return deepest;
}

namespace {

struct Split {
  bool found = false;
  double gain = 0.0;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::vector<bool> left_levels;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& x, std::span<const double> y,
              std::size_t max_depth, std::size_t min_leaf)
      : x_(x), y_(y), max_depth_(max_depth), min_leaf_(min_leaf) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    double sum = 0.0;
    for (std::size_t r : rows) sum += y_[r];
    const double mean = sum / static_cast<double>(rows.size());
    nodes_[id].value = mean;
    nodes_[id].count = rows.size();

    if (depth >= max_depth_ || rows.size() < 2 * min_leaf_) return id;
    double sse = 0.0;
    for (std::size_t r : rows) sse += (y_[r] - mean) * (y_[r] - mean);
    if (!(sse > 0.0)) return id;

    Split best;
    for (std::size_t f = 0; f < x_.num_columns(); ++f) {
      if (x_.feature(f).is_continuous()) {
        search_continuous(rows, f, sum, best);
      } else {
        search_categorical(rows, f, sum, best);
      }
    }
    if (!best.found || best.gain <= 1e-12 * sse) return id;

    std::vector<std::size_t> left, right;
    auto column = x_.column(best.feature);
    for (std::size_t r : rows) {
      const double v = column[r];
      const bool go_left =
          best.left_levels.empty()
              ? v <= best.threshold
              : best.left_levels[static_cast<std::size_t>(v)];
      (go_left ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes_[id].feature = static_cast<std::int32_t>(best.feature);
    nodes_[id].threshold = best.threshold;
    nodes_[id].left_levels = std::move(best.left_levels);
    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    nodes_[id].left = static_cast<std::int32_t>(l);
    nodes_[id].right = static_cast<std::int32_t>(r);
    return id;
  }

  void consider(Split& best, double gain, std::size_t feature,
                double threshold, std::vector<bool> levels) {
    if (best.found && !(gain > best.gain)) return;
    best.found = true;
    best.gain = gain;
    best.feature = feature;
    best.threshold = threshold;
    best.left_levels = std::move(levels);
  }

  void search_continuous(const std::vector<std::size_t>& rows, std::size_t f,
                         double total, Split& best) {
    auto column = x_.column(f);
    std::vector<std::size_t> order = rows;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return column[a] < column[b];
                     });
    const std::size_t n = order.size();
    const double base = total * total / static_cast<double>(n);
    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += y_[order[i]];
      const double here = column[order[i]];
      const double next = column[order[i + 1]];
      if (!(here < next)) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < min_leaf_ || n_right < min_leaf_) continue;
      const double right_sum = total - left_sum;
      const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                          right_sum * right_sum / static_cast<double>(n_right) -
                          base;
      double threshold = here + (next - here) / 2.0;
      if (!(threshold < next)) threshold = here;
      consider(best, gain, f, threshold, {});
    }
  }

  void search_categorical(const std::vector<std::size_t>& rows, std::size_t f,
                          double total, Split& best) {
    auto column = x_.column(f);
    const std::size_t n_levels = x_.feature(f).levels.size();
    std::vector<double> sums(n_levels, 0.0);
    std::vector<std::size_t> counts(n_levels, 0);
    for (std::size_t r : rows) {
      const auto level = static_cast<std::size_t>(column[r]);
      sums[level] += y_[r];
      ++counts[level];
    }
    std::vector<std::size_t> present;
    for (std::size_t l = 0; l < n_levels; ++l) {
      if (counts[l] > 0) present.push_back(l);
    }
    if (present.size() < 2) return;
    std::stable_sort(present.begin(), present.end(),
                     [&](std::size_t a, std::size_t b) {
                       return sums[a] / static_cast<double>(counts[a]) <
                              sums[b] / static_cast<double>(counts[b]);
                     });
    const std::size_t n = rows.size();
    const double base = total * total / static_cast<double>(n);
    double left_sum = 0.0;
    std::size_t n_left = 0;
    std::vector<bool> mask(n_levels, false);
    for (std::size_t m = 0; m + 1 < present.size(); ++m) {
      left_sum += sums[present[m]];
      n_left += counts[present[m]];
      mask[present[m]] = true;
      const std::size_t n_right = n - n_left;
      if (n_left < min_leaf_ || n_right < min_leaf_) continue;
      const double right_sum = total - left_sum;
      const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                          right_sum * right_sum / static_cast<double>(n_right) -
                          base;
      consider(best, gain, f, static_cast<double>(m + 1), mask);
    }
  }

  const Dataset& x_;
  std::span<const double> y_;
  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree fit_tree(const Dataset& x, std::span<const double> y,
                        std::span<const std::size_t> sample,
                        std::size_t max_depth, std::size_t min_leaf) {
  if (sample.empty()) throw ParameterError("cannot fit a tree on zero rows");
  if (min_leaf < 1) throw ParameterError("min_leaf must be positive");
  TreeBuilder builder(x, y, max_depth, min_leaf);
  return RegressionTree(
      builder.build(std::vector<std::size_t>(sample.begin(), sample.end())));
}

BaggedTreesModel::BaggedTreesModel(std::vector<FeatureSchema> features,
                                   TreeParams params,
                                   std::vector<RegressionTree> trees)
    : features_(std::move(features)),
      params_(params),
      trees_(std::move(trees)) {
  if (trees_.empty()) throw ParameterError("bagged model has no trees");
  for (const auto& tree : trees_) {
    roots_.push_back(static_cast<std::int32_t>(flat_.size()));
    depths_.push_back(tree.depth());
    const auto offset = roots_.back();
    for (const auto& node : tree.nodes()) {
      FlatNode flat;
      if (node.is_leaf()) {
        flat.feature = 0;
        flat.left = flat.right = static_cast<std::int32_t>(flat_.size());
        flat.value = node.value;
      } else {
        if (static_cast<std::size_t>(node.feature) >= features_.size()) {
          throw ParameterError("tree node references an unknown feature");
        }
        flat.feature = node.feature;
        flat.left = node.left + offset;
        flat.right = node.right + offset;
        flat.value = node.threshold;
        if (!node.left_levels.empty()) {
          flat.levels = static_cast<std::int32_t>(level_masks_.size());
          flat.n_levels = static_cast<std::int32_t>(node.left_levels.size());
          for (bool b : node.left_levels) level_masks_.push_back(b ? 1 : 0);
        }
      }
      flat_.push_back(flat);
    }
  }
}

std::vector<double> BaggedTreesModel::predict(const Dataset& batch) const {
  const auto columns = bind_columns(batch, features_);
  const std::size_t n = batch.num_rows();
  const std::size_t p = features_.size();
  std::vector<double> rows(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    auto column = batch.column(columns[j]);
    for (std::size_t r = 0; r < n; ++r) rows[r * p + j] = column[r];
  }
  // Tree-major traversal; each row still accumulates trees in order. Leaves
  // point at themselves, so every row takes exactly `depth` steps and
  // several rows can be walked in lockstep.
  const FlatNode* nodes = flat_.data();
  auto step = [&](std::int32_t i, const double* row) {
    const FlatNode& node = nodes[i];
    const double v = row[node.feature];
    std::int32_t go_left;
    if (node.levels < 0) {
      go_left = v <= node.value;
    } else {
      const auto level = static_cast<std::int32_t>(v);
      go_left = level < node.n_levels &&
                level_masks_[static_cast<std::size_t>(node.levels + level)];
    }
    return node.right + go_left * (node.left - node.right);
  };
  constexpr std::size_t kLanes = 8;
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < roots_.size(); ++t) {
    const std::int32_t root = roots_[t];
    const std::size_t depth = depths_[t];
    std::size_t r = 0;
    for (; r + kLanes <= n; r += kLanes) {
      std::int32_t at[kLanes];
      for (std::size_t u = 0; u < kLanes; ++u) at[u] = root;
      for (std::size_t d = 0; d < depth; ++d) {
        for (std::size_t u = 0; u < kLanes; ++u) {
          at[u] = step(at[u], rows.data() + (r + u) * p);
        }
      }
      for (std::size_t u = 0; u < kLanes; ++u) out[r + u] += nodes[at[u]].value;
    }
    for (; r < n; ++r) {
      std::int32_t at = root;
      for (std::size_t d = 0; d < depth; ++d) at = step(at, rows.data() + r * p);
      out[r] += nodes[at].value;
    }
  }
  const double n_trees = static_cast<double>(trees_.size());
  for (double& v : out) v /= n_trees;
  return out;
}

BaggedTreesModel fit_bagged_trees(const Dataset& data,
                                  std::string_view target_name,
                                  const TreeParams& params,
                                  std::size_t workers) {
  if (params.n_trees < 1) throw ParameterError("n_trees must be positive");
  if (params.min_leaf < 1) throw ParameterError("min_leaf must be positive");
  auto [x, y] = split_target(data, target_name);
  const std::size_t n = x.num_rows();
  if (n < 2 * params.min_leaf) {
    throw ParameterError("bagged trees need at least 2 * min_leaf = " +
                         std::to_string(2 * params.min_leaf) + " rows, got " +
                         std::to_string(n));
  }
  std::vector<RegressionTree> trees(params.n_trees);
  parallel_for(params.n_trees, workers, [&](std::size_t t, std::size_t) {
    std::vector<std::size_t> sample(n);
    if (params.bootstrap) {
      Rng rng(params.seed, t);
      for (auto& s : sample) s = rng.uniform_index(n);
    } else {
      std::iota(sample.begin(), sample.end(), std::size_t{0});
    }
    trees[t] = fit_tree(x, y, sample, params.max_depth, params.min_leaf);
  });
  return BaggedTreesModel(x.schema(), params, std::move(trees));
}

}  // namespace pdimp
