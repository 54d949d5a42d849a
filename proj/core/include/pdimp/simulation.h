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

#ifndef PDIMP_SIMULATION_H_
#define PDIMP_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "pdimp/dataset.h"

namespace pdimp {

// y = b0 + b1 x1 + b2 x2 + e, x1, x2 ~ U(0, 1), e ~ N(0, sigma^2).
struct LinearSimulation {
  double b0 = 1.0;
  double b1 = 3.0;
  double b2 = -5.0;
  double sigma = 0.01;
};

// y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + e over ten
// U(0, 1) features; x6..x10 do not enter the response.
struct FriedmanSimulation {
  double sigma = 1.0;
};

struct SimulationSpec {
  std::variant<LinearSimulation, FriedmanSimulation> kind;
  std::size_t n = 1000;
  std::uint64_t seed = 42;
};

// Noise-free Friedman response as an expression over x1..x10.
inline constexpr std::string_view kFriedmanFormula =
    "10*sin(pi*x1*x2) + 20*(x3-0.5)^2 + 10*x4 + 5*x5";

// Draws rows from Rng(seed, 0) in row order: for each row the features in
// column order, then one normal deviate for the noise (drawn even when
// sigma = 0). Columns are x1, x2 (linear) or x1..x10 (Friedman), then y.
// Throws ParameterError for n = 0 or negative sigma.
Dataset generate(const SimulationSpec& spec);

enum class LinearFeature { kX1, kX2 };

// True partial dependence under uniform marginals:
//   x1: b0 + b2 / 2 + b1 v,   x2: b0 + b1 / 2 + b2 v.
double true_pd_linear(LinearFeature which, double b0, double b1, double b2,
                      double value);

enum class FriedmanPair { kX1X2, kX1X4 };

struct TruePd {
  double value = 0.0;
  // True when x1 = 0 and the removable singularity was replaced by its limit.
  bool limit_evaluated = false;
};

// Closed-form joint partial dependence of the Friedman response:
//   (x1, x2): 10 sin(pi x1 x2) + 55/6
//   (x1, x4): [5 pi x1 (12 x4 + 5) - 12 cos(pi x1) + 12] / (6 pi x1)
TruePd true_pd_friedman_pair(FriedmanPair pair, double a, double b);

}  // namespace pdimp

#endif  // PDIMP_SIMULATION_H_
