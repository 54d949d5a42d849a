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

#include "pdimp/model_io.h"

#include <json.hpp>

#include "pdimp/bagged_trees.h"
#include "pdimp/error.h"
#include "pdimp/expression.h"
#include "pdimp/knn_model.h"
#include "pdimp/linear_model.h"

namespace pdimp {
namespace {

using nlohmann::json;

json schema_to_json(const std::vector<FeatureSchema>& schema) {
  json out = json::array();
  for (const auto& f : schema) {
    json entry = {{"name", f.name}, {"kind", std::string(to_string(f.kind))}};
    if (f.is_categorical()) entry["levels"] = f.levels;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<FeatureSchema> schema_from_json(const json& doc) {
  std::vector<FeatureSchema> schema;
  for (const auto& entry : doc) {
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "continuous") {
      schema.push_back(FeatureSchema::continuous(entry.at("name")));
    } else if (kind == "categorical") {
      schema.push_back(FeatureSchema::categorical(
          entry.at("name"), entry.at("levels").get<std::vector<std::string>>()));
    } else {
      throw ParseError("unknown feature kind '" + kind + "'");
    }
    schema.back().validate();
  }
  return schema;
}

json tree_to_json(const RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes()) {
    json n = {{"value", node.value}, {"count", node.count}};
    if (!node.is_leaf()) {
      n["feature"] = node.feature;
      n["left"] = node.left;
      n["right"] = node.right;
      if (node.left_levels.empty()) {
        n["threshold"] = node.threshold;
      } else {
        std::vector<int> mask(node.left_levels.begin(), node.left_levels.end());
        n["left_levels"] = mask;
      }
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

RegressionTree tree_from_json(const json& doc) {
  std::vector<TreeNode> nodes;
  for (const auto& n : doc) {
    TreeNode node;
    node.value = n.at("value").get<double>();
    node.count = n.at("count").get<std::size_t>();
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<std::int32_t>();
      node.left = n.at("left").get<std::int32_t>();
      node.right = n.at("right").get<std::int32_t>();
      if (n.contains("left_levels")) {
        for (int bit : n.at("left_levels")) node.left_levels.push_back(bit != 0);
      } else {
        node.threshold = n.at("threshold").get<double>();
      }
    }
    nodes.push_back(std::move(node));
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace

std::string model_to_json(const PredictionModel& model) {
  json doc = {{"format", "pdimp-model"},
              {"version", kModelFormatVersion},
              {"kind", std::string(model.kind())},
              {"features", schema_to_json(model.features())}};
  if (auto* m = dynamic_cast<const LinearModel*>(&model)) {
    doc["intercept"] = m->intercept();
    doc["coefficients"] = m->coefficients();
  } else if (auto* m = dynamic_cast<const KnnModel*>(&model)) {
    doc["k"] = m->k();
    doc["rows"] = m->rows();
    doc["targets"] = m->targets();
    doc["centers"] = m->centers();
    doc["scales"] = m->scales();
  } else if (auto* m = dynamic_cast<const BaggedTreesModel*>(&model)) {
    const TreeParams& p = m->params();
    doc["params"] = {{"n_trees", p.n_trees},
                     {"max_depth", p.max_depth},
                     {"min_leaf", p.min_leaf},
                     {"seed", p.seed},
                     {"bootstrap", p.bootstrap}};
    json trees = json::array();
    for (const auto& tree : m->trees()) trees.push_back(tree_to_json(tree));
    doc["trees"] = std::move(trees);
  } else if (auto* m = dynamic_cast<const ExpressionModel*>(&model)) {
    doc["source"] = m->source();
  } else {
    throw UnsupportedError("models of kind '" + std::string(model.kind()) +
                           "' cannot be serialized");
  }
  return doc.dump(2) + "\n";
}

std::unique_ptr<PredictionModel> model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "pdimp-model") {
      throw ParseError("not a pdimp model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw UnsupportedError("unsupported model format version " +
                             std::to_string(version));
    }
    const std::string kind = doc.at("kind").get<std::string>();
    auto features = schema_from_json(doc.at("features"));
    if (kind == "linear") {
      return std::make_unique<LinearModel>(
          std::move(features), doc.at("intercept").get<double>(),
          doc.at("coefficients").get<std::vector<double>>());
    }
    if (kind == "knn") {
      return std::make_unique<KnnModel>(
          std::move(features), doc.at("k").get<std::size_t>(),
          doc.at("rows").get<std::vector<double>>(),
          doc.at("targets").get<std::vector<double>>(),
          doc.at("centers").get<std::vector<double>>(),
          doc.at("scales").get<std::vector<double>>());
    }
    if (kind == "bagged") {
      const json& p = doc.at("params");
      TreeParams params;
      params.n_trees = p.at("n_trees").get<std::size_t>();
      params.max_depth = p.at("max_depth").get<std::size_t>();
      params.min_leaf = p.at("min_leaf").get<std::size_t>();
      params.seed = p.at("seed").get<std::uint64_t>();
      params.bootstrap = p.at("bootstrap").get<bool>();
      std::vector<RegressionTree> trees;
      for (const auto& t : doc.at("trees")) trees.push_back(tree_from_json(t));
      return std::make_unique<BaggedTreesModel>(std::move(features), params,
                                                std::move(trees));
    }
    if (kind == "expression") {
      return std::make_unique<ExpressionModel>(parse_expression(
          doc.at("source").get<std::string>(), std::move(features)));
    }
    throw UnsupportedError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace pdimp
