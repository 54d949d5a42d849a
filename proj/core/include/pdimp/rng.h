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

#ifndef PDIMP_RNG_H_
#define PDIMP_RNG_H_

#include <cstddef>
#include <cstdint>

namespace pdimp {

// "pdimp-splitmix64/v1": a counter-based generator. Draw number i (0-based) of
// stream s under seed k is
//
//   mix64(base + (i + 1) * 0x9E3779B97F4A7C15),  base = mix64(k ^ mix64(s))
//
// where mix64 is the SplitMix64 finalizer. Uniform reals use the top 53 bits:
// (bits >> 11 + 0.5) * 2^-53, which lies strictly inside (0, 1). Normal
// deviates are the inverse normal CDF (Wichura's AS 241) of one uniform draw.
// Every implementation following this description reproduces the same
// streams.
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform in the open interval (0, 1).
  double uniform();
  // Uniform integer in [0, n). `n` must be positive.
  std::size_t uniform_index(std::size_t n);
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

// Inverse of the standard normal CDF for p in (0, 1), accurate to about 1e-16.
double normal_quantile(double p);

}  // namespace pdimp

#endif  // PDIMP_RNG_H_
