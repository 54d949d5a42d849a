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

#ifndef PDIMP_MODEL_IO_H_
#define PDIMP_MODEL_IO_H_

#include <memory>
#include <string>
#include <string_view>

#include "pdimp/model.h"

namespace pdimp {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON document: {"format": "pdimp-model", "version": 1,
// "kind": ..., "features": [...], ...kind-specific parameters}. Expression
// models are stored as their source text. Throws UnsupportedError for model
// kinds without a serialized form (external models).
std::string model_to_json(const PredictionModel& model);

// Throws ParseError for malformed documents and UnsupportedError for unknown
// kinds or versions.
std::unique_ptr<PredictionModel> model_from_json(std::string_view text);

}  // namespace pdimp

#endif  // PDIMP_MODEL_IO_H_
