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

#ifndef PDIMP_EXPRESSION_H_
#define PDIMP_EXPRESSION_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdimp/model.h"

namespace pdimp {

// Stack-machine instruction of a compiled expression.
struct Instruction {
  enum class Op {
    kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg,
    kSin, kCos, kExp, kLog, kSqrt, kAbs,
  };
  Op op;
  double value = 0.0;     // kConst
  std::size_t index = 0;  // kVar: position in the schema
};

// A prediction function given by a formula over continuous features.
//
// Grammar, loosest binding first:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | name '(' sum ')' | '(' sum ')'
// Functions: sin cos exp log sqrt abs. Constant: pi. Feature names shadow
// the constant.
class ExpressionModel : public PredictionModel {
 public:
  std::string_view kind() const override { return "expression"; }
  const std::vector<FeatureSchema>& features() const override {
    return features_;
  }
  std::vector<double> predict(const Dataset& batch) const override;

  // Evaluates one point; `values` follows features() order.
  double evaluate(std::span<const double> values) const;

  const std::string& source() const { return source_; }
  const std::vector<Instruction>& program() const { return program_; }
  // Names of the features the formula actually reads, in schema order.
  std::vector<std::string> variables() const;

 private:
  friend ExpressionModel parse_expression(std::string_view,
                                          std::vector<FeatureSchema>);
  std::string source_;
  std::vector<FeatureSchema> features_;
  std::vector<Instruction> program_;
  std::size_t max_stack_ = 0;
};

// Compiles `text` against `schema`. Throws ParseError (with a 0-based
// character offset) on syntax errors, LookupError on unknown names,
// ArityError on wrong argument counts and UnsupportedError when a variable
// names a categorical feature.
ExpressionModel parse_expression(std::string_view text,
                                 std::vector<FeatureSchema> schema);

}  // namespace pdimp

#endif  // PDIMP_EXPRESSION_H_
