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

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles.h"
#include "pdimp/bagged_trees.h"
#include "pdimp/error.h"
#include "pdimp/expression.h"
#include "pdimp/knn_model.h"
#include "pdimp/linear_model.h"
#include "pdimp/model_io.h"
#include "pdimp/rng.h"
#include "pdimp/simulation.h"

namespace pdimp {
namespace {

using ::pdimp::testing::ExpressionGenerator;
using ::pdimp::testing::ReferenceEvaluator;

Dataset Continuous(std::vector<std::string> names,
                   std::vector<std::vector<double>> cols) {
  std::vector<FeatureSchema> schema;
  for (auto& n : names) schema.push_back(FeatureSchema::continuous(n));
  return Dataset(std::move(schema), std::move(cols));
}

std::vector<double> Repeat(const PredictionModel& m, const Dataset& d) {
  return m.predict(d);
}

// ---------------------------------------------------------------- linear

TEST(LinearModelTest, PredictsByHand) {
  LinearModel m({FeatureSchema::continuous("x1"), FeatureSchema::continuous("x2")},
                1.0, {3.0, -5.0});
  const Dataset row = Continuous({"x1", "x2"}, {{0.5}, {0.5}});
  EXPECT_EQ(m.predict(row)[0], 0.0);
}

TEST(LinearModelTest, NoiselessFitIsExact) {
  Rng rng(3);
  std::vector<double> x1(50), x2(50), y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    x1[i] = rng.uniform();
    x2[i] = rng.uniform();
    y[i] = 1.0 + 3.0 * x1[i] - 5.0 * x2[i];
  }
  const LinearModel m = fit_linear(Continuous({"x1", "x2", "y"}, {x1, x2, y}), "y");
  EXPECT_NEAR(m.intercept(), 1.0, 1e-10);
  EXPECT_NEAR(m.coefficients()[0], 3.0, 1e-10);
  EXPECT_NEAR(m.coefficients()[1], -5.0, 1e-10);
}

TEST(LinearModelTest, ReproducesRandomSurfaces) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed, 1);
    const std::size_t p = 1 + rng.uniform_index(5);
    const std::size_t n = p + 5 + rng.uniform_index(30);
    std::vector<double> beta(p + 1);
    for (auto& b : beta) b = (rng.uniform() - 0.5) * 20.0;
    std::vector<std::vector<double>> cols(p + 1, std::vector<double>(n));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("f" + std::to_string(j));
    names.push_back("target");
    for (std::size_t r = 0; r < n; ++r) {
      double y = beta[0];
      for (std::size_t j = 0; j < p; ++j) {
        cols[j][r] = rng.normal() * 3.0;
        y += beta[j + 1] * cols[j][r];
      }
      cols[p][r] = y;
    }
    const Dataset d = Continuous(names, cols);
    const LinearModel m = fit_linear(d, "target");
    const auto pred = m.predict(split_target(d, "target").first);
    for (std::size_t r = 0; r < n; ++r) {
      EXPECT_LE(std::fabs(pred[r] - cols[p][r]),
                1e-8 * std::max(1.0, std::fabs(cols[p][r])));
    }
  }
}

TEST(LinearModelTest, ConstantColumnIsSingular) {
  const Dataset d = Continuous({"a", "b", "y"}, {{1, 2, 3, 4, 5},
                                                 {7, 7, 7, 7, 7},
                                                 {1, 0, 2, 5, 3}});
  try {
    fit_linear(d, "y");
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("b"), std::string::npos) << what;
    EXPECT_NE(what.find("(intercept)"), std::string::npos) << what;
  }
}

TEST(LinearModelTest, MissingTargetAndTooFewRows) {
  const Dataset d = Continuous({"a", "y"}, {{1, 2}, {3, 4}});
  EXPECT_THROW(fit_linear(d, "nope"), LookupError);
  EXPECT_THROW(fit_linear(d, "y"), ParameterError);
}

TEST(LinearModelTest, NoisyFitMatchesNormalEquations) {
  const Dataset d = generate({LinearSimulation{1, 3, -5, 0.01}, 1000, 42});
  const LinearModel m = fit_linear(d, "y");
  // Normal equations (X'X) b = X'y with X = [1, x1, x2].
  std::vector<double> xtx(9, 0.0), xty(3, 0.0);
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const double row[3] = {1.0, d.at(r, 0), d.at(r, 1)};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) xtx[i * 3 + j] += row[i] * row[j];
      xty[i] += row[i] * d.at(r, 2);
    }
  }
  const auto b = testing::solve_dense(xtx, xty);
  EXPECT_NEAR(m.intercept(), b[0], 1e-9);
  EXPECT_NEAR(m.coefficients()[0], b[1], 1e-9);
  EXPECT_NEAR(m.coefficients()[1], b[2], 1e-9);
  EXPECT_NEAR(m.coefficients()[0], 3.0, 0.01);
  EXPECT_NEAR(m.coefficients()[1], -5.0, 0.01);
}

TEST(LinearModelTest, ReferenceCodingForCategoricals) {
  // y = 2 + 1*x + {a: 0, b: 10, c: -4}
  std::vector<double> x, c, y;
  const double effect[] = {0.0, 10.0, -4.0};
  for (int i = 0; i < 12; ++i) {
    x.push_back(i * 0.5);
    c.push_back(i % 3);
    y.push_back(2.0 + 0.5 * i + effect[i % 3]);
  }
  const Dataset d({FeatureSchema::continuous("x"),
                   FeatureSchema::categorical("c", {"a", "b", "c"}),
                   FeatureSchema::continuous("y")},
                  {x, c, y});
  const LinearModel m = fit_linear(d, "y");
  EXPECT_EQ(m.design_column_names(),
            (std::vector<std::string>{"x", "c=b", "c=c"}));
  EXPECT_NEAR(m.intercept(), 2.0, 1e-10);
  EXPECT_NEAR(m.coefficients()[0], 1.0, 1e-10);
  EXPECT_NEAR(m.coefficients()[1], 10.0, 1e-10);
  EXPECT_NEAR(m.coefficients()[2], -4.0, 1e-10);
  EXPECT_EQ(design_width(m.features()), 3u);
}

TEST(LinearModelTest, ValidatesConstruction) {
  EXPECT_THROW(LinearModel({FeatureSchema::continuous("a")}, 0.0, {1.0, 2.0}),
               ParameterError);
  EXPECT_THROW(LinearModel({FeatureSchema::continuous("a")},
                           std::numeric_limits<double>::infinity(), {1.0}),
               NumericError);
}

// ---------------------------------------------------------------- k-NN

TEST(KnnModelTest, KEqualsNIsGlobalMean) {
  const Dataset d = Continuous({"a", "y"}, {{1, 5, 2, 8}, {1, 2, 3, 10}});
  const KnnModel m = fit_knn(d, "y", 4);
  const Dataset q = Continuous({"a"}, {{-100, 0, 3.3, 1e6}});
  for (double v : m.predict(q)) EXPECT_EQ(v, 4.0);
}

TEST(KnnModelTest, KOneOnTrainingRowIsOwnTarget) {
  const Dataset d = Continuous({"a", "b", "y"},
                               {{1, 5, 2, 8}, {0, 3, 1, 1}, {1, 2, 3, 10}});
  const KnnModel m = fit_knn(d, "y", 1);
  EXPECT_EQ(m.predict(split_target(d, "y").first),
            (std::vector<double>{1, 2, 3, 10}));
}

TEST(KnnModelTest, HandEnumeratedFiveRows) {
  // Rows (x1, x2) -> y: (0,0)->10 (1,0)->20 (0,2)->30 (3,3)->40 (4,1)->50.
  // Means (1.6, 1.2); sample variances 13.2/4 = 3.3 and 6.8/4 = 1.7.
  // Query (1, 0.9), squared standardized distances:
  //   row0 1/3.3 + 0.81/1.7 = 0.7795   row1 0/3.3 + 0.81/1.7 = 0.4765
  //   row2 1/3.3 + 1.21/1.7 = 1.0148   row3 4/3.3 + 4.41/1.7 = 3.8062
  //   row4 9/3.3 + 0.01/1.7 = 2.7332
  // Nearest two: rows 1 and 0 -> (20 + 10) / 2; three adds row 2 -> 20.
  const Dataset d = Continuous({"x1", "x2", "y"}, {{0, 1, 0, 3, 4},
                                                   {0, 0, 2, 3, 1},
                                                   {10, 20, 30, 40, 50}});
  const Dataset q = Continuous({"x1", "x2"}, {{1}, {0.9}});
  EXPECT_EQ(fit_knn(d, "y", 2).predict(q)[0], 15.0);
  EXPECT_EQ(fit_knn(d, "y", 3).predict(q)[0], 20.0);
  const KnnModel m = fit_knn(d, "y", 2);
  EXPECT_DOUBLE_EQ(m.scales()[0], std::sqrt(3.3));
  EXPECT_DOUBLE_EQ(m.scales()[1], std::sqrt(1.7));
}

TEST(KnnModelTest, DistanceTiesGoToLowerRow) {
  const Dataset d = Continuous({"a", "y"}, {{0, 0, 1}, {1, 2, 3}});
  const Dataset q = Continuous({"a"}, {{0}});
  EXPECT_EQ(fit_knn(d, "y", 1).predict(q)[0], 1.0);
}

TEST(KnnModelTest, ConstantColumnScaleIsOne) {
  const Dataset d = Continuous({"a", "c", "y"}, {{0, 1, 2}, {4, 4, 4}, {1, 2, 3}});
  const KnnModel m = fit_knn(d, "y", 1);
  EXPECT_EQ(m.scales()[1], 1.0);
  EXPECT_GT(m.scales()[0], 0.0);
}

TEST(KnnModelTest, Errors) {
  const Dataset d = Continuous({"a", "y"}, {{0, 1, 2}, {1, 2, 3}});
  EXPECT_THROW(fit_knn(d, "y", 0), ParameterError);
  EXPECT_THROW(fit_knn(d, "y", 4), ParameterError);
  const Dataset c({FeatureSchema::categorical("g", {"u", "v"}),
                   FeatureSchema::continuous("y")},
                  {{0, 1}, {1, 2}});
  EXPECT_THROW(fit_knn(c, "y", 1), UnsupportedError);
}

// ---------------------------------------------------------------- trees

TEST(BaggedTreesTest, DepthZeroPredictsBootstrapMean) {
  Rng rng(8);
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.normal();
  }
  const Dataset d = Continuous({"x", "y"}, {x, y});
  TreeParams params;
  params.n_trees = 1;
  params.max_depth = 0;
  params.seed = 77;
  const BaggedTreesModel m = fit_bagged_trees(d, "y", params);
  // Same bootstrap draw as the fitter: Rng(seed, tree index).
  Rng boot(77, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < 40; ++i) sum += y[boot.uniform_index(40)];
  const double mean = sum / 40.0;
  for (double v : m.predict(split_target(d, "y").first)) EXPECT_EQ(v, mean);
}

TEST(BaggedTreesTest, TwoClustersSplitInGap) {
  const Dataset d = Continuous({"x", "y"}, {{-3, -2, -1.5, -1, 1, 1.5, 2, 3},
                                            {0, 0, 0, 0, 1, 1, 1, 1}});
  TreeParams params;
  params.n_trees = 1;
  params.max_depth = 1;
  params.min_leaf = 1;
  params.bootstrap = false;
  const BaggedTreesModel m = fit_bagged_trees(d, "y", params);
  const auto& root = m.trees()[0].nodes()[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_GT(root.threshold, -1.0);
  EXPECT_LT(root.threshold, 1.0);
  EXPECT_EQ(m.trees()[0].nodes()[root.left].value, 0.0);
  EXPECT_EQ(m.trees()[0].nodes()[root.right].value, 1.0);
}

// Exhaustive-search CART oracle: at every node try every feature and every
// midpoint between consecutive distinct values, keep the first strictly
// best SSE (child SSE computed directly, not by the gain identity).
struct OracleNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  double value = 0.0;
  std::unique_ptr<OracleNode> left, right;
};

double Sse(const std::vector<double>& y) {
  double m = 0.0;
  for (double v : y) m += v;
  m /= static_cast<double>(y.size());
  double s = 0.0;
  for (double v : y) s += (v - m) * (v - m);
  return s;
}

std::unique_ptr<OracleNode> OracleGrow(const std::vector<std::vector<double>>& x,
                                       const std::vector<double>& y,
                                       const std::vector<std::size_t>& rows,
                                       std::size_t depth, std::size_t max_depth) {
  auto node = std::make_unique<OracleNode>();
  double sum = 0.0;
  std::vector<double> ys;
  for (auto r : rows) {
    sum += y[r];
    ys.push_back(y[r]);
  }
  node->value = sum / static_cast<double>(rows.size());
  if (depth >= max_depth || rows.size() < 2) return node;
  double best = Sse(ys);
  bool found = false;
  for (std::size_t f = 0; f < x.size(); ++f) {
    std::vector<double> vals;
    for (auto r : rows) vals.push_back(x[f][r]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double t = vals[i] + (vals[i + 1] - vals[i]) / 2.0;
      std::vector<double> l, rr;
      for (auto r : rows) (x[f][r] <= t ? l : rr).push_back(y[r]);
      const double sse = Sse(l) + Sse(rr);
      if (sse < best - 1e-12) {
        best = sse;
        found = true;
        node->feature = f;
        node->threshold = t;
      }
    }
  }
  if (!found) return node;
  node->leaf = false;
  std::vector<std::size_t> l, rr;
  for (auto r : rows) (x[node->feature][r] <= node->threshold ? l : rr).push_back(r);
  node->left = OracleGrow(x, y, l, depth + 1, max_depth);
  node->right = OracleGrow(x, y, rr, depth + 1, max_depth);
  return node;
}

void ExpectSameTree(const OracleNode& o, const RegressionTree& t, std::int32_t id) {
  const TreeNode& n = t.nodes()[static_cast<std::size_t>(id)];
  ASSERT_EQ(o.leaf, n.is_leaf());
  EXPECT_NEAR(n.value, o.value, 1e-12);
  if (o.leaf) return;
  EXPECT_EQ(static_cast<std::size_t>(n.feature), o.feature);
  EXPECT_EQ(n.threshold, o.threshold);
  ExpectSameTree(*o.left, t, n.left);
  ExpectSameTree(*o.right, t, n.right);
}

TEST(BaggedTreesTest, EightRowTreeMatchesExhaustiveOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed, 5);
    std::vector<std::vector<double>> x(2, std::vector<double>(8));
    std::vector<double> y(8);
    for (std::size_t r = 0; r < 8; ++r) {
      x[0][r] = rng.uniform();
      x[1][r] = rng.uniform();
      y[r] = std::sin(6 * x[0][r]) + x[1][r] * x[1][r] + 0.1 * rng.normal();
    }
    const Dataset data = Continuous({"a", "b"}, x);
    std::vector<std::size_t> all = {0, 1, 2, 3, 4, 5, 6, 7};
    const RegressionTree tree = fit_tree(data, y, all, 2, 1);
    const auto oracle = OracleGrow(x, y, all, 0, 2);
    SCOPED_TRACE("seed " + std::to_string(seed));
    ExpectSameTree(*oracle, tree, 0);
  }
}

TEST(BaggedTreesTest, ThreeTreeTraversalOracle) {
  auto leaf = [](double v) {
    TreeNode n;
    n.value = v;
    return n;
  };
  auto split = [](int f, double t, int l, int r) {
    TreeNode n;
    n.feature = f;
    n.threshold = t;
    n.left = l;
    n.right = r;
    return n;
  };
  // A: x1 <= 0.5 ? 1 : 2
  RegressionTree a({split(0, 0.5, 1, 2), leaf(1), leaf(2)});
  // B: x2 <= 0.3 ? 10 : (x1 <= 0.8 ? 20 : 30)
  RegressionTree b({split(1, 0.3, 1, 2), leaf(10), split(0, 0.8, 3, 4), leaf(20),
                    leaf(30)});
  // C: constant 6
  RegressionTree c({leaf(6)});
  const BaggedTreesModel m(
      {FeatureSchema::continuous("x1"), FeatureSchema::continuous("x2")},
      TreeParams{}, {a, b, c});
  // Hand traversal:
  //   (0.2, 0.1): 1 + 10 + 6 = 17     (0.6, 0.9): 2 + 20 + 6 = 28
  //   (0.9, 0.5): 2 + 30 + 6 = 38     (0.5, 0.3): 1 + 10 + 6 = 17
  std::vector<double> x1 = {0.2, 0.6, 0.9, 0.5}, x2 = {0.1, 0.9, 0.5, 0.3};
  for (int rep = 0; rep < 3; ++rep) {  // also exercise the multi-row path
    x1.insert(x1.end(), x1.begin(), x1.begin() + 4);
    x2.insert(x2.end(), x2.begin(), x2.begin() + 4);
  }
  const auto pred = m.predict(Continuous({"x1", "x2"}, {x1, x2}));
  const double want[] = {17.0 / 3, 28.0 / 3, 38.0 / 3, 17.0 / 3};
  for (std::size_t r = 0; r < pred.size(); ++r) EXPECT_EQ(pred[r], want[r % 4]);
  for (std::size_t r = 0; r < 4; ++r) {
    const double row[] = {x1[r], x2[r]};
    EXPECT_EQ(a.predict_row(row) + b.predict_row(row) + c.predict_row(row),
              want[r] * 3);
  }
}

TEST(BaggedTreesTest, CategoricalSubsetSplit) {
  // Level means: a 0, b 5, c 1 -> ordered a, c, b; best split {a, c} | {b}.
  std::vector<double> g, y;
  const double mean[] = {0, 5, 1};
  for (int i = 0; i < 30; ++i) {
    g.push_back(i % 3);
    y.push_back(mean[i % 3]);
  }
  const Dataset d({FeatureSchema::categorical("g", {"a", "b", "c"}),
                   FeatureSchema::continuous("y")},
                  {g, y});
  TreeParams params;
  params.n_trees = 1;
  params.max_depth = 1;
  params.min_leaf = 1;
  params.bootstrap = false;
  const BaggedTreesModel m = fit_bagged_trees(d, "y", params);
  const auto& root = m.trees()[0].nodes()[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(root.left_levels, (std::vector<bool>{true, false, true}));
  const auto pred = m.predict(split_target(d, "y").first);
  EXPECT_DOUBLE_EQ(pred[0], 0.5);
  EXPECT_DOUBLE_EQ(pred[1], 5.0);
}

TEST(BaggedTreesTest, LeavesRespectMinLeafAndDepth) {
  const Dataset d = generate({FriedmanSimulation{1.0}, 300, 9});
  TreeParams params;
  params.n_trees = 10;
  params.max_depth = 4;
  params.min_leaf = 7;
  const BaggedTreesModel m = fit_bagged_trees(d, "y", params);
  for (const auto& tree : m.trees()) {
    EXPECT_LE(tree.depth(), 4u);
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) EXPECT_GE(node.count, 7u);
    }
  }
}

TEST(BaggedTreesTest, BitReproducibleAcrossWorkers) {
  const Dataset d = generate({FriedmanSimulation{1.0}, 200, 4});
  TreeParams params;
  params.n_trees = 12;
  const BaggedTreesModel one = fit_bagged_trees(d, "y", params, 1);
  for (std::size_t w : {2u, 3u, 8u}) {
    const BaggedTreesModel many = fit_bagged_trees(d, "y", params, w);
    EXPECT_TRUE(many.trees() == one.trees());
  }
  EXPECT_EQ(model_to_json(one), model_to_json(fit_bagged_trees(d, "y", params)));
}

TEST(BaggedTreesTest, Errors) {
  const Dataset d = Continuous({"x", "y"}, {{1, 2, 3}, {1, 2, 3}});
  TreeParams params;
  params.min_leaf = 2;
  EXPECT_THROW(fit_bagged_trees(d, "y", params), ParameterError);
  params.min_leaf = 1;
  params.n_trees = 0;
  EXPECT_THROW(fit_bagged_trees(d, "y", params), ParameterError);
}

// ---------------------------------------------------------------- expression

std::vector<FeatureSchema> Schema(std::initializer_list<const char*> names) {
  std::vector<FeatureSchema> s;
  for (auto* n : names) s.push_back(FeatureSchema::continuous(n));
  return s;
}

double Eval(const std::string& text, std::vector<double> values = {},
            std::initializer_list<const char*> names = {"x1", "x2"}) {
  const ExpressionModel m = parse_expression(text, Schema(names));
  values.resize(m.features().size(), 0.0);
  return m.evaluate(values);
}

TEST(ExpressionTest, Examples) {
  EXPECT_EQ(Eval("1 + 3*x1 - 5*x2", {0, 0}), 1.0);
  EXPECT_EQ(Eval("10*sin(pi*x1*x2)", {0.5, 1}), 10.0);
  EXPECT_EQ(Eval("2^3^2"), 512.0);
}

TEST(ExpressionTest, Precedence) {
  EXPECT_EQ(Eval("-2^2"), -4.0);
  EXPECT_EQ(Eval("2^-1"), 0.5);
  EXPECT_EQ(Eval("1 - 2 - 3"), -4.0);
  EXPECT_EQ(Eval("8 / 4 / 2"), 1.0);
  EXPECT_EQ(Eval("2 * -3 + 1"), -5.0);
  EXPECT_EQ(Eval("(1 + 2) * 3"), 9.0);
  EXPECT_EQ(Eval("--2"), 2.0);
  EXPECT_EQ(Eval("1.5e1 + .5"), 15.5);
  EXPECT_EQ(Eval("abs(-3) + sqrt(16) + exp(0) + log(1) + cos(0)"), 9.0);
}

TEST(ExpressionTest, FriedmanFormulaVanishes) {
  const ExpressionModel m = parse_expression(
      kFriedmanFormula, Schema({"x1", "x2", "x3", "x4", "x5"}));
  const double row[] = {0, 0.5, 0.5, 0, 0};
  EXPECT_EQ(m.evaluate(row), 0.0);
}

TEST(ExpressionTest, Errors) {
  try {
    parse_expression("1 + * 2", Schema({"x1"}));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse_expression("", Schema({"x1"})), ParseError);
  EXPECT_THROW(parse_expression("(1 + x1", Schema({"x1"})), ParseError);
  EXPECT_THROW(parse_expression("1 + y", Schema({"x1"})), LookupError);
  EXPECT_THROW(parse_expression("foo(x1)", Schema({"x1"})), LookupError);
  EXPECT_THROW(parse_expression("sin(x1, x1)", Schema({"x1"})), ArityError);
  EXPECT_THROW(parse_expression("sin()", Schema({"x1"})), ArityError);
  EXPECT_THROW(parse_expression("sin + 1", Schema({"x1"})), ArityError);
  EXPECT_THROW(parse_expression("2 * g", {FeatureSchema::categorical("g", {"a"})}),
               UnsupportedError);
}

TEST(ExpressionTest, FeatureShadowsPi) {
  const ExpressionModel m = parse_expression("pi * 2", Schema({"pi"}));
  const double row[] = {4.0};
  EXPECT_EQ(m.evaluate(row), 8.0);
  EXPECT_EQ(Eval("pi", {}, {"x1"}), std::numbers::pi);
}

TEST(ExpressionTest, MatchesReferenceTreeWalker) {
  const std::vector<std::string> vars = {"x1", "x2", "x3"};
  ExpressionGenerator gen(vars, 1234);
  Rng rng(77);
  // Keep drawing until 100 pairs have a finite reference value; NaN pairs must
  // agree on NaN along the way.
  int compared = 0, drawn = 0;
  for (; compared < 100 && drawn < 2000; ++drawn) {
    const std::string text = gen.next();
    const ExpressionModel m = parse_expression(text, Schema({"x1", "x2", "x3"}));
    const ReferenceEvaluator ref(text);
    double point[3];
    std::map<std::string, double> env;
    for (std::size_t j = 0; j < 3; ++j) {
      point[j] = (rng.uniform() - 0.5) * 4.0;
      env[vars[j]] = point[j];
    }
    const double got = m.evaluate(point);
    const double want = ref(env);
    SCOPED_TRACE(text);
    if (std::isnan(want)) {
      EXPECT_TRUE(std::isnan(got));
    } else {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(got), std::bit_cast<std::uint64_t>(want));
      ++compared;
    }
  }
  EXPECT_EQ(compared, 100) << "after " << drawn << " draws";
}

TEST(ExpressionTest, PredictBindsByName) {
  const ExpressionModel m = parse_expression("x1 - 2*x2", Schema({"x1", "x2"}));
  const Dataset swapped = Continuous({"x2", "x1"}, {{1, 2}, {10, 20}});
  EXPECT_EQ(m.predict(swapped), (std::vector<double>{8, 16}));
}

// ---------------------------------------------------------------- contract

TEST(ModelContractTest, MissingAndExtraFeaturesListed) {
  LinearModel m({FeatureSchema::continuous("x1"), FeatureSchema::continuous("x2")},
                1.0, {3.0, -5.0});
  try {
    m.predict(Continuous({"x1", "z"}, {{1}, {2}}));
    FAIL();
  } catch (const ContractError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("x2"), std::string::npos) << what;
    EXPECT_NE(what.find("z"), std::string::npos) << what;
  }
}

class AllModelsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    data_ = generate({FriedmanSimulation{0.5}, 120, 3});
    x_ = split_target(data_, "y").first;
    TreeParams params;
    params.n_trees = 5;
    models_.push_back(std::make_unique<LinearModel>(fit_linear(data_, "y")));
    models_.push_back(std::make_unique<KnnModel>(fit_knn(data_, "y", 7)));
    models_.push_back(
        std::make_unique<BaggedTreesModel>(fit_bagged_trees(data_, "y", params)));
    models_.push_back(std::make_unique<ExpressionModel>(
        parse_expression(kFriedmanFormula, x_.schema())));
  }
  Dataset data_, x_;
  std::vector<std::unique_ptr<PredictionModel>> models_;
};

TEST_F(AllModelsTest, BatchInvarianceAndDeterminism) {
  for (const auto& m : models_) {
    SCOPED_TRACE(std::string(m->kind()));
    const auto whole = m->predict(x_);
    EXPECT_EQ(whole, Repeat(*m, x_));
    for (std::size_t r = 0; r < x_.num_rows(); r += 13) {
      const std::size_t idx[] = {r};
      EXPECT_EQ(m->predict(x_.take_rows(idx))[0], whole[r]);
    }
    std::vector<std::size_t> reversed(x_.num_rows());
    for (std::size_t r = 0; r < reversed.size(); ++r) reversed[r] = reversed.size() - 1 - r;
    const auto back = m->predict(x_.take_rows(reversed));
    for (std::size_t r = 0; r < reversed.size(); ++r) {
      EXPECT_EQ(back[r], whole[reversed[r]]);
    }
  }
}

TEST_F(AllModelsTest, JsonRoundTripPreservesPredictions) {
  for (const auto& m : models_) {
    SCOPED_TRACE(std::string(m->kind()));
    const std::string text = model_to_json(*m);
    const auto back = model_from_json(text);
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(back->predict(x_), m->predict(x_));
    EXPECT_EQ(model_to_json(*back), text);
  }
}

TEST(ModelIoTest, RejectsBadDocuments) {
  EXPECT_THROW(model_from_json("not json"), ParseError);
  EXPECT_THROW(model_from_json(R"({"format":"pdimp-model","version":99,"kind":"linear"})"),
               UnsupportedError);
  EXPECT_THROW(model_from_json(R"({"format":"other"})"), ParseError);
}

}  // namespace
}  // namespace pdimp
