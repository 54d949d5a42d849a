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

#ifndef PDIMP_INTERACTION_H_
#define PDIMP_INTERACTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdimp/dataset.h"
#include "pdimp/grid.h"
#include "pdimp/importance.h"
#include "pdimp/model.h"
#include "pdimp/partial_dependence.h"

namespace pdimp {

using FeaturePair = std::pair<std::string, std::string>;

// Friedman-Popescu H for one pair. `defined` is false when the centred joint
// partial dependence is identically zero (no variation to explain).
struct HStatistic {
  double value = 0.0;
  bool defined = true;
};

struct PairInteraction {
  std::string feature_i;
  std::string feature_j;
  // Mean of the two directional spreads below.
  double stat_pd = 0.0;
  // Sample sd over the x_j grid of the flatness of the joint-PD slice in x_i.
  double spread_i_given_j = 0.0;
  // Same with the roles swapped.
  double spread_j_given_i = 0.0;
  // Plain sample sd of all joint-PD cells (diagnostic only).
  double joint_sd = 0.0;
  std::optional<HStatistic> h;
};

// Pairs sorted by descending stat_pd; ties keep pair order.
struct InteractionReport {
  std::vector<PairInteraction> pairs;

  // Order-insensitive lookup. Throws LookupError.
  const PairInteraction& find(std::string_view a, std::string_view b) const;
};

struct InteractionOptions {
  GridStrategy grid = GridStrategy::quantile(10);
  // Flatness of each conditional slice; categorical slice features use
  // range / 4 regardless.
  FlatnessMeasure measure = FlatnessMeasure::kSampleSd;
  bool with_h = false;
  // Workers spread over pairs in interaction_matrix().
  PDOptions pd;
};

// Interaction statistic of one pair computed from an existing joint PD.
PairInteraction interaction_from_joint_pd(const PDResult& joint,
                                          FlatnessMeasure measure);

// Builds the joint PD over the pair and applies interaction_from_joint_pd().
// Throws ParameterError for identical features and DegenerateError when
// either axis has fewer than two grid points.
PairInteraction pd_interaction(const PredictionModel& model, const Dataset& data,
                               const FeaturePair& pair,
                               const InteractionOptions& options = {});

// All unordered pairs of `data` columns when `pairs` is empty.
InteractionReport interaction_matrix(const PredictionModel& model,
                                     const Dataset& data,
                                     std::span<const FeaturePair> pairs = {},
                                     const InteractionOptions& options = {});

// H^2 = sum_r [F_ij(r) - F_i(r) - F_j(r)]^2 / sum_r F_ij(r)^2 where each F is
// a partial dependence evaluated at training row r's own values and centred
// by its mean over the rows; returns sqrt(max(H^2, 0)).
HStatistic h_statistic(const PredictionModel& model, const Dataset& data,
                       const FeaturePair& pair, const PDOptions& options = {});

// All unordered column pairs in column order: (0,1), (0,2), ..., (p-2,p-1).
std::vector<FeaturePair> all_pairs(const Dataset& data);

}  // namespace pdimp

#endif  // PDIMP_INTERACTION_H_
