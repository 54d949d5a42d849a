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

#ifndef PDIMP_ERROR_H_
#define PDIMP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pdimp {

// Root of every exception thrown by the library. The CLI maps subclasses of
// BridgeError to exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input: CSV bodies, expression sources, JSON documents.
// `row` is 1-based for CSV data rows (0 when not applicable); `offset` is a
// 0-based character offset for expression sources.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t offset = 0)
      : Error(what), row_(row), offset_(offset) {}
  std::size_t row() const { return row_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t row_;
  std::size_t offset_;
};

// A numeric cell that does not parse in a column declared continuous.
class CellTypeError : public ParseError {
 public:
  CellTypeError(const std::string& what, std::string column, std::size_t row)
      : ParseError(what, row), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

// Wrong number of arguments to an expression function.
class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Unknown feature, column, variable or function name.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter values (k out of range, too few rows, bad strategy).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A grid or column with too few distinct points for the requested statistic.
class DegenerateError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Rank-deficient design matrix.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A batch whose schema does not match what a model expects.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Non-finite predictions or values where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Feature kinds or operations a component does not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Failures talking to an external model process.
class BridgeError : public Error {
 public:
  using Error::Error;
};

class SpawnError : public BridgeError {
 public:
  SpawnError(const std::string& what, std::string diagnostics = {})
      : BridgeError(what), diagnostics_(std::move(diagnostics)) {}
  // Whatever the child wrote to stderr before failing.
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class ProtocolError : public BridgeError {
 public:
  using BridgeError::BridgeError;
};

class TimeoutError : public ProtocolError {
 public:
  TimeoutError(const std::string& what, std::size_t received)
      : ProtocolError(what), received_(received) {}
  // Number of complete response lines read before the deadline.
  std::size_t received() const { return received_; }

 private:
  std::size_t received_;
};

}  // namespace pdimp

#endif  // PDIMP_ERROR_H_
