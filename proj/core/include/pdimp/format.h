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

#ifndef PDIMP_FORMAT_H_
#define PDIMP_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>

namespace pdimp {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Decimal text with 17 significant digits (the bridge wire format).
std::string format_double17(double value);

// Parses a finite real. Leading/trailing ASCII blanks and a leading '+' are
// accepted; anything else that is not a complete number (including "nan" and
// "inf") yields nullopt.
std::optional<double> parse_finite_double(std::string_view text);

// Quotes a CSV field when it contains a delimiter, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace pdimp

#endif  // PDIMP_FORMAT_H_
