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

#ifndef PDIMP_EXTERNAL_MODEL_H_
#define PDIMP_EXTERNAL_MODEL_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "pdimp/model.h"

namespace pdimp {

inline constexpr int kBridgeProtocolVersion = 1;

// A model served by a child process over stdin/stdout.
//
// Wire protocol, version 1:
//   child  -> {"protocol":1,"features":["x1","x2",...]}\n     (once, at start)
//   parent -> {"n":N}\n followed by N CSV rows in handshake feature order
//   child  -> N lines, one decimal prediction each, in request order
// Categorical cells are sent as level labels. Reals are sent in shortest
// round-trip form; children should reply with 17 significant digits.
//
// Requests are serialized: predict() may be called from several threads but
// calls never interleave on the wire. The child's stderr is collected and
// attached to spawn errors.
class ExternalModel : public PredictionModel {
 public:
  ~ExternalModel() override;
  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  std::string_view kind() const override { return "external"; }
  // Handshake feature names. Kinds are taken from each batch, so these are
  // reported as continuous placeholders.
  const std::vector<FeatureSchema>& features() const override {
    return features_;
  }
  // Throws ContractError for batches missing handshake features (or carrying
  // extra ones), ProtocolError for malformed replies and TimeoutError when
  // the reply is not complete within the timeout.
  std::vector<double> predict(const Dataset& batch) const override;
  bool concurrency_safe() const override { return false; }

  const std::vector<std::string>& command() const { return command_; }
  int protocol_version() const { return protocol_version_; }
  std::chrono::milliseconds timeout() const { return timeout_; }
  std::size_t requests_sent() const;
  // Child stderr collected so far.
  std::string diagnostics() const;

 private:
  friend std::unique_ptr<ExternalModel> spawn_external(
      std::vector<std::string>, std::chrono::milliseconds);
  ExternalModel() = default;

  struct Pipes;
  std::vector<std::string> command_;
  std::chrono::milliseconds timeout_{0};
  int protocol_version_ = 0;
  std::vector<FeatureSchema> features_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Pipes> pipes_;
  mutable std::size_t requests_ = 0;
};

// Launches `command` (argv[0] is looked up on PATH) and completes the
// handshake. Throws SpawnError when the program cannot be started, exits or
// sends a malformed handshake, and TimeoutError when no handshake arrives in
// time.
std::unique_ptr<ExternalModel> spawn_external(
    std::vector<std::string> command,
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

// Splits a command line on blanks, honouring single and double quotes.
std::vector<std::string> split_command_line(std::string_view line);

}  // namespace pdimp

#endif  // PDIMP_EXTERNAL_MODEL_H_
