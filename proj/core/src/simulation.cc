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

#include "pdimp/simulation.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pdimp/error.h"
#include "pdimp/format.h"
#include "pdimp/rng.h"

namespace pdimp {

Dataset generate(const SimulationSpec& spec) {
  if (spec.n == 0) throw ParameterError("simulation needs n >= 1");
  Rng rng(spec.seed);
  const std::size_t n = spec.n;

  if (const auto* lin = std::get_if<LinearSimulation>(&spec.kind)) {
    if (!(lin->sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      const double x1 = rng.uniform();
      const double x2 = rng.uniform();
      const double noise = rng.normal();
      cols[0][r] = x1;
      cols[1][r] = x2;
      cols[2][r] = lin->b0 + lin->b1 * x1 + lin->b2 * x2 + lin->sigma * noise;
    }
    return Dataset({FeatureSchema::continuous("x1"),
                    FeatureSchema::continuous("x2"),
                    FeatureSchema::continuous("y")},
                   std::move(cols));
  }

  const auto& fr = std::get<FriedmanSimulation>(spec.kind);
  if (!(fr.sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  std::vector<FeatureSchema> schema;
  for (int j = 1; j <= 10; ++j) {
    schema.push_back(FeatureSchema::continuous("x" + std::to_string(j)));
  }
  schema.push_back(FeatureSchema::continuous("y"));
  std::vector<std::vector<double>> cols(11, std::vector<double>(n));
  double x[10];
  for (std::size_t r = 0; r < n; ++r) {
    for (int j = 0; j < 10; ++j) {
      x[j] = rng.uniform();
      cols[static_cast<std::size_t>(j)][r] = x[j];
    }
    const double noise = rng.normal();
    cols[10][r] = 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) +
                  20.0 * ((x[2] - 0.5) * (x[2] - 0.5)) + 10.0 * x[3] +
                  5.0 * x[4] + fr.sigma * noise;
  }
  return Dataset(std::move(schema), std::move(cols));
}

double true_pd_linear(LinearFeature which, double b0, double b1, double b2,
                      double value) {
  return which == LinearFeature::kX1 ? b0 + b2 / 2.0 + b1 * value
                                     : b0 + b1 / 2.0 + b2 * value;
}

TruePd true_pd_friedman_pair(FriedmanPair pair, double a, double b) {
  constexpr double pi = std::numbers::pi;
  if (pair == FriedmanPair::kX1X2) {
    return {10.0 * std::sin(pi * a * b) + 55.0 / 6.0, false};
  }
  if (a == 0.0) {
    // (1 - cos(pi x1)) / (pi x1) -> 0, leaving 5 (12 x4 + 5) / 6.
    return {5.0 * (12.0 * b + 5.0) / 6.0, true};
  }
  return {(5.0 * pi * a * (12.0 * b + 5.0) - 12.0 * std::cos(pi * a) + 12.0) /
              (6.0 * pi * a),
          false};
}

}  // namespace pdimp
