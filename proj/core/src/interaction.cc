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

#include "pdimp/interaction.h"

#include <algorithm>
#include <cmath>

#include "pdimp/error.h"
#include "pdimp/parallel.h"

namespace pdimp {
namespace {

double sample_sd(std::span<const double> values) {
  return flatness(values, FlatnessMeasure::kSampleSd);
}

// Partial dependence of `feature` evaluated at every row's own value.
std::vector<double> pd_at_rows(const PredictionModel& model,
                               const Dataset& data, const std::string& feature,
                               const PDOptions& options) {
  auto column = data.column(feature);
  const std::vector<double> distinct = unique_sorted(column);
  const std::string names[] = {feature};
  const std::vector<double> values =
      partial_dependence_at(model, data, names, distinct, options);
  std::vector<double> out(column.size());
  for (std::size_t r = 0; r < column.size(); ++r) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), column[r]);
    out[r] = values[static_cast<std::size_t>(it - distinct.begin())];
  }
  return out;
}

// Joint partial dependence evaluated at every row's own (x_i, x_j).
std::vector<double> joint_pd_at_rows(const PredictionModel& model,
                                     const Dataset& data,
                                     const FeaturePair& pair,
                                     const PDOptions& options) {
  auto ci = data.column(pair.first);
  auto cj = data.column(pair.second);
  const std::size_t n = ci.size();
  std::vector<std::pair<double, double>> distinct(n);
  for (std::size_t r = 0; r < n; ++r) distinct[r] = {ci[r], cj[r]};
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> points;
  points.reserve(distinct.size() * 2);
  for (const auto& [a, b] : distinct) {
    points.push_back(a);
    points.push_back(b);
  }
  const std::string names[] = {pair.first, pair.second};
  const std::vector<double> values =
      partial_dependence_at(model, data, names, points, options);
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(),
                                     std::make_pair(ci[r], cj[r]));
    out[r] = values[static_cast<std::size_t>(it - distinct.begin())];
  }
  return out;
}

HStatistic h_from_row_pds(std::span<const double> fi, std::span<const double> fj,
                          std::span<const double> fij) {
  const std::size_t n = fij.size();
  auto mean = [&](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(n);
  };
  const double mi = mean(fi), mj = mean(fj), mij = mean(fij);
  double numerator = 0.0, denominator = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double joint = fij[r] - mij;
    const double diff = joint - (fi[r] - mi) - (fj[r] - mj);
    numerator += diff * diff;
    denominator += joint * joint;
    scale = std::max(scale, std::fabs(fij[r]));
  }
  // A joint PD that is constant up to rounding carries no signal.
  const double rms = std::sqrt(denominator / static_cast<double>(n));
  if (!(rms > 1e-10 * std::max(scale, 1.0))) return {0.0, false};
  return {std::sqrt(std::max(numerator / denominator, 0.0)), true};
}

void check_pair(const Dataset& data, const FeaturePair& pair) {
  data.index_of(pair.first);
  data.index_of(pair.second);
  if (pair.first == pair.second) {
    throw ParameterError("interaction needs two distinct features, got '" +
                         pair.first + "' twice");
  }
}

}  // namespace

const PairInteraction& InteractionReport::find(std::string_view a,
                                               std::string_view b) const {
  for (const auto& p : pairs) {
    if ((p.feature_i == a && p.feature_j == b) ||
        (p.feature_i == b && p.feature_j == a)) {
      return p;
    }
  }
  throw LookupError("no interaction entry for (" + std::string(a) + ", " +
                    std::string(b) + ")");
}

PairInteraction interaction_from_joint_pd(const PDResult& joint,
                                          FlatnessMeasure measure) {
  if (joint.grid.axes.size() != 2) {
    throw ParameterError("interaction needs a two-feature partial dependence");
  }
  const GridAxis& ai = joint.grid.axes[0];
  const GridAxis& aj = joint.grid.axes[1];
  if (ai.size() < 2 || aj.size() < 2) {
    throw DegenerateError("interaction of (" + ai.feature.name + ", " +
                          aj.feature.name +
                          ") needs at least 2 grid points per feature");
  }
  const FlatnessMeasure mi = effective_measure(ai.feature.kind, measure);
  const FlatnessMeasure mj = effective_measure(aj.feature.kind, measure);

  std::vector<double> given_j(aj.size());
  for (std::size_t j = 0; j < aj.size(); ++j) {
    given_j[j] = flatness(joint.slice_axis0(j), mi);
  }
  std::vector<double> given_i(ai.size());
  for (std::size_t i = 0; i < ai.size(); ++i) {
    given_i[i] = flatness(joint.slice_axis1(i), mj);
  }

  PairInteraction out;
  out.feature_i = ai.feature.name;
  out.feature_j = aj.feature.name;
  out.spread_i_given_j = sample_sd(given_j);
  out.spread_j_given_i = sample_sd(given_i);
  out.stat_pd = (out.spread_i_given_j + out.spread_j_given_i) / 2.0;
  out.joint_sd = sample_sd(joint.values);
  return out;
}

PairInteraction pd_interaction(const PredictionModel& model, const Dataset& data,
                               const FeaturePair& pair,
                               const InteractionOptions& options) {
  check_pair(data, pair);
  const std::string names[] = {pair.first, pair.second};
  const Grid grid = build_grid(data, names, options.grid);
  const PDResult joint = joint_partial_dependence(model, data, grid, options.pd);
  PairInteraction out = interaction_from_joint_pd(joint, options.measure);
  if (options.with_h) out.h = h_statistic(model, data, pair, options.pd);
  return out;
}

HStatistic h_statistic(const PredictionModel& model, const Dataset& data,
                       const FeaturePair& pair, const PDOptions& options) {
  check_pair(data, pair);
  if (data.num_rows() == 0) throw ParameterError("H-statistic needs rows");
  const auto fi = pd_at_rows(model, data, pair.first, options);
  const auto fj = pd_at_rows(model, data, pair.second, options);
  const auto fij = joint_pd_at_rows(model, data, pair, options);
  return h_from_row_pds(fi, fj, fij);
}

std::vector<FeaturePair> all_pairs(const Dataset& data) {
  std::vector<FeaturePair> pairs;
  for (std::size_t a = 0; a < data.num_columns(); ++a) {
    for (std::size_t b = a + 1; b < data.num_columns(); ++b) {
      pairs.emplace_back(data.feature(a).name, data.feature(b).name);
    }
  }
  return pairs;
}

InteractionReport interaction_matrix(const PredictionModel& model,
                                     const Dataset& data,
                                     std::span<const FeaturePair> pairs,
                                     const InteractionOptions& options) {
  std::vector<FeaturePair> todo =
      pairs.empty() ? all_pairs(data)
                    : std::vector<FeaturePair>(pairs.begin(), pairs.end());
  for (const auto& pair : todo) check_pair(data, pair);

  PDOptions serial = options.pd;
  serial.workers = 1;
  const std::size_t workers =
      model.concurrency_safe() ? std::max<std::size_t>(options.pd.workers, 1) : 1;

  // Per-row marginal PDs are shared by every pair a feature appears in.
  std::vector<std::vector<double>> marginal(data.num_columns());
  if (options.with_h) {
    std::vector<bool> needed(data.num_columns(), false);
    for (const auto& pair : todo) {
      needed[data.index_of(pair.first)] = true;
      needed[data.index_of(pair.second)] = true;
    }
    parallel_for(data.num_columns(), workers, [&](std::size_t c, std::size_t) {
      if (needed[c]) {
        marginal[c] = pd_at_rows(model, data, data.feature(c).name, serial);
      }
    });
  }

  std::vector<PairInteraction> results(todo.size());
  parallel_for(todo.size(), workers, [&](std::size_t k, std::size_t) {
    const FeaturePair& pair = todo[k];
    const std::string names[] = {pair.first, pair.second};
    const Grid grid = build_grid(data, names, options.grid);
    const PDResult joint = joint_partial_dependence(model, data, grid, serial);
    results[k] = interaction_from_joint_pd(joint, options.measure);
    if (options.with_h) {
      const auto fij = joint_pd_at_rows(model, data, pair, serial);
      results[k].h = h_from_row_pds(marginal[data.index_of(pair.first)],
                                    marginal[data.index_of(pair.second)], fij);
    }
  });
  std::stable_sort(results.begin(), results.end(),
                   [](const PairInteraction& a, const PairInteraction& b) {
                     return a.stat_pd > b.stat_pd;
                   });
  return InteractionReport{std::move(results)};
}

}  // namespace pdimp
