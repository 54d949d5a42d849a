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

#include "pdimp/expression.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "pdimp/error.h"

namespace pdimp {
namespace {

using Op = Instruction::Op;

std::optional<Op> function_op(std::string_view name) {
  if (name == "sin") return Op::kSin;
  if (name == "cos") return Op::kCos;
  if (name == "exp") return Op::kExp;
  if (name == "log") return Op::kLog;
  if (name == "sqrt") return Op::kSqrt;
  if (name == "abs") return Op::kAbs;
  return std::nullopt;
}

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<FeatureSchema>& schema)
      : text_(text), schema_(schema) {}

  std::vector<Instruction> parse() {
    skip_blanks();
    if (pos_ == text_.size()) fail("empty expression");
    sum();
    skip_blanks();
    if (pos_ != text_.size()) {
      fail(std::string("unexpected '") + text_[pos_] + "'");
    }
    return std::move(program_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " +
                         what,
                     0, pos_);
  }

  void skip_blanks() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_blanks();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op) { program_.push_back({op}); }

  void sum() {
    product();
    for (;;) {
      if (accept('+')) {
        product();
        emit(Op::kAdd);
      } else if (accept('-')) {
        product();
        emit(Op::kSub);
      } else {
        return;
      }
    }
  }

  void product() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::kMul);
      } else if (accept('/')) {
        unary();
        emit(Op::kDiv);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::kNeg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::kPow);
    }
  }

  void primary() {
    skip_blanks();
    if (pos_ == text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      sum();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (is_name_start(c)) {
      name();
      return;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  void number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[p]))) {
          ++p;
        }
        pos_ = p;
      }
    }
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    program_.push_back({Op::kConst, value});
  }

  void name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    skip_blanks();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto op = function_op(id);
      if (!op) {
        throw LookupError("unknown function '" + std::string(id) +
                          "' at offset " + std::to_string(start));
      }
      ++pos_;
      if (accept(')')) {
        throw ArityError("function '" + std::string(id) +
                             "' takes 1 argument, got 0",
                         0, start);
      }
      sum();
      std::size_t args = 1;
      while (accept(',')) {
        sum();
        ++args;
      }
      if (args != 1) {
        throw ArityError("function '" + std::string(id) +
                             "' takes 1 argument, got " + std::to_string(args),
                         0, start);
      }
      if (!accept(')')) fail("expected ')'");
      emit(*op);
      return;
    }

    for (std::size_t i = 0; i < schema_.size(); ++i) {
      if (schema_[i].name != id) continue;
      if (!schema_[i].is_continuous()) {
        throw UnsupportedError("variable '" + std::string(id) +
                               "' names a categorical feature");
      }
      program_.push_back({Op::kVar, 0.0, i});
      return;
    }
    if (id == "pi") {
      program_.push_back({Op::kConst, std::numbers::pi});
      return;
    }
    if (function_op(id)) {
      throw ArityError("function '" + std::string(id) +
                           "' used without an argument list",
                       0, start);
    }
    throw LookupError("unknown variable '" + std::string(id) + "' at offset " +
                      std::to_string(start));
  }

  std::string_view text_;
  const std::vector<FeatureSchema>& schema_;
  std::size_t pos_ = 0;
  std::vector<Instruction> program_;
};

}  // namespace

ExpressionModel parse_expression(std::string_view text,
                                 std::vector<FeatureSchema> schema) {
  ExpressionModel model;
  model.program_ = Parser(text, schema).parse();
  model.source_ = std::string(text);
  model.features_ = std::move(schema);
  std::size_t depth = 0;
  for (const auto& ins : model.program_) {
    switch (ins.op) {
      case Op::kConst:
      case Op::kVar:
        ++depth;
        break;
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
      case Op::kDiv:
      case Op::kPow:
        --depth;
        break;
      default:
        break;
    }
    model.max_stack_ = std::max(model.max_stack_, depth);
  }
  return model;
}

double ExpressionModel::evaluate(std::span<const double> values) const {
  // Small fixed buffer for typical formulas; larger ones fall back to heap.
  double local[32] = {};
  std::vector<double> heap;
  double* stack = local;
  if (max_stack_ > 32) {
    heap.resize(max_stack_);
    stack = heap.data();
  }
  std::size_t top = 0;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::kConst: stack[top++] = ins.value; break;
      case Op::kVar: stack[top++] = values[ins.index]; break;
      case Op::kAdd: --top; stack[top - 1] += stack[top]; break;
      case Op::kSub: --top; stack[top - 1] -= stack[top]; break;
      case Op::kMul: --top; stack[top - 1] *= stack[top]; break;
      case Op::kDiv: --top; stack[top - 1] /= stack[top]; break;
      case Op::kPow:
        --top;
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        break;
      case Op::kNeg: stack[top - 1] = -stack[top - 1]; break;
      case Op::kSin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::kCos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::kExp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::kLog: stack[top - 1] = std::log(stack[top - 1]); break;
      case Op::kSqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
      case Op::kAbs: stack[top - 1] = std::fabs(stack[top - 1]); break;
    }
  }
  return stack[0];
}

std::vector<double> ExpressionModel::predict(const Dataset& batch) const {
  const auto columns = bind_columns(batch, features_);
  std::vector<double> out(batch.num_rows());
  std::vector<double> row(features_.size());
  for (std::size_t r = 0; r < batch.num_rows(); ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      row[j] = batch.at(r, columns[j]);
    }
    out[r] = evaluate(row);
  }
  return out;
}

std::vector<std::string> ExpressionModel::variables() const {
  std::vector<bool> used(features_.size(), false);
  for (const auto& ins : program_) {
    if (ins.op == Op::kVar) used[ins.index] = true;
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) names.push_back(features_[i].name);
  }
  return names;
}

}  // namespace pdimp
