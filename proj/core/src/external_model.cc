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

#include "pdimp/external_model.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <json.hpp>
#include <thread>

#include "pdimp/error.h"
#include "pdimp/format.h"

extern char** environ;

namespace pdimp {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxDiagnostics = 64 * 1024;

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction sa;
    std::memset(&sa, 0, sizeof(sa));
    sa.sa_handler = SIG_IGN;
    ::sigaction(SIGPIPE, &sa, nullptr);
  });
}

}  // namespace

struct ExternalModel::Pipes {
  pid_t pid = -1;
  int in = -1;   // child's stdin (we write)
  int out = -1;  // child's stdout (we read)
  int err = -1;  // child's stderr (we read)
  std::string out_buffer;
  std::string diagnostics;

  ~Pipes() {
    close_fd(in);
    if (pid > 0) {
      // Give the child a moment to exit on EOF, then force it.
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid, nullptr, WNOHANG) == pid) {
          pid = -1;
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
      if (pid > 0) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
      }
    }
    close_fd(out);
    close_fd(err);
  }

  void append_diagnostics(const char* data, std::size_t len) {
    if (diagnostics.size() < kMaxDiagnostics) {
      diagnostics.append(data, std::min(len, kMaxDiagnostics - diagnostics.size()));
    }
  }

  // Reads whatever stderr remains after the child closed stdout.
  void drain_stderr(Clock::time_point deadline) {
    char buf[4096];
    while (err >= 0 && Clock::now() < deadline) {
      pollfd p{err, POLLIN, 0};
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (::poll(&p, 1, static_cast<int>(std::max<long>(ms.count(), 0))) <= 0) {
        return;
      }
      const ssize_t got = ::read(err, buf, sizeof(buf));
      if (got <= 0) {
        close_fd(err);
        return;
      }
      append_diagnostics(buf, static_cast<std::size_t>(got));
    }
  }

  enum class Status { kDone, kEof, kTimeout };

  // Writes `request` while collecting stdout lines until `want` complete
  // lines are buffered in `lines`.
  Status exchange(std::string_view request, std::size_t want,
                  std::vector<std::string>& lines, Clock::time_point deadline,
                  std::string& error) {
    std::size_t written = 0;
    char buf[65536];
    auto take_lines = [&] {
      std::size_t start = 0;
      for (;;) {
        const std::size_t nl = out_buffer.find('\n', start);
        if (nl == std::string::npos) break;
        std::string line = out_buffer.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
      }
      out_buffer.erase(0, start);
    };
    take_lines();
    while (lines.size() < want || written < request.size()) {
      if (Clock::now() >= deadline) return Status::kTimeout;
      pollfd fds[3];
      nfds_t count = 0;
      int out_slot = -1, err_slot = -1, in_slot = -1;
      if (out >= 0 && lines.size() < want) {
        out_slot = static_cast<int>(count);
        fds[count++] = {out, POLLIN, 0};
      }
      if (err >= 0) {
        err_slot = static_cast<int>(count);
        fds[count++] = {err, POLLIN, 0};
      }
      if (written < request.size()) {
        in_slot = static_cast<int>(count);
        fds[count++] = {in, POLLOUT, 0};
      }
      if (out_slot < 0 && in_slot < 0) return Status::kEof;
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - Clock::now())
                          .count();
      const int ready = ::poll(fds, count, static_cast<int>(std::max<long>(ms, 1)));
      if (ready < 0) {
        if (errno == EINTR) continue;
        error = std::string("poll failed: ") + std::strerror(errno);
        return Status::kEof;
      }
      if (ready == 0) continue;
      if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
        const ssize_t put = ::write(in, request.data() + written,
                                    request.size() - written);
        if (put < 0) {
          if (errno != EAGAIN && errno != EINTR) {
            error = std::string("write to child failed: ") + std::strerror(errno);
            return Status::kEof;
          }
        } else {
          written += static_cast<std::size_t>(put);
        }
      }
      if (err_slot >= 0 && (fds[err_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
        const ssize_t got = ::read(err, buf, sizeof(buf));
        if (got <= 0) {
          close_fd(err);
        } else {
          append_diagnostics(buf, static_cast<std::size_t>(got));
        }
      }
      if (out_slot >= 0 && (fds[out_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
        const ssize_t got = ::read(out, buf, sizeof(buf));
        if (got <= 0) {
          close_fd(out);
          return Status::kEof;
        }
        out_buffer.append(buf, static_cast<std::size_t>(got));
        take_lines();
      }
    }
    return Status::kDone;
  }
};

ExternalModel::~ExternalModel() = default;

std::size_t ExternalModel::requests_sent() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

std::string ExternalModel::diagnostics() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return pipes_ ? pipes_->diagnostics : std::string();
}

std::unique_ptr<ExternalModel> spawn_external(std::vector<std::string> command,
                                              std::chrono::milliseconds timeout) {
  if (command.empty() || command.front().empty()) {
    throw SpawnError("empty external command");
  }
  ignore_sigpipe();

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw SpawnError(std::string("pipe failed: ") + std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SpawnError(std::string("pipe failed: ") + std::strerror(errno));
  }
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw SpawnError(std::string("pipe failed: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], 2);

  std::vector<char*> argv;
  for (auto& arg : command) argv.push_back(arg.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(),
                                environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  if (rc != 0) {
    for (int fd : {in_pipe[1], out_pipe[0], err_pipe[0]}) ::close(fd);
    throw SpawnError("cannot launch '" + command.front() +
                     "': " + std::strerror(rc));
  }

  auto pipes = std::make_unique<ExternalModel::Pipes>();
  pipes->pid = pid;
  pipes->in = in_pipe[1];
  pipes->out = out_pipe[0];
  pipes->err = err_pipe[0];
  ::fcntl(pipes->in, F_SETFL, ::fcntl(pipes->in, F_GETFL) | O_NONBLOCK);

  const auto deadline = Clock::now() + timeout;
  std::vector<std::string> lines;
  std::string error;
  const auto status = pipes->exchange({}, 1, lines, deadline, error);
  if (status == ExternalModel::Pipes::Status::kTimeout) {
    throw TimeoutError("no handshake from '" + command.front() + "' within " +
                           std::to_string(timeout.count()) + " ms",
                       0);
  }
  if (status == ExternalModel::Pipes::Status::kEof) {
    pipes->drain_stderr(Clock::now() + std::chrono::milliseconds(500));
    throw SpawnError("'" + command.front() +
                         "' exited before completing the handshake" +
                         (error.empty() ? "" : " (" + error + ")") +
                         (pipes->diagnostics.empty()
                              ? ""
                              : "; stderr: " + pipes->diagnostics),
                     pipes->diagnostics);
  }

  auto model = std::unique_ptr<ExternalModel>(new ExternalModel());
  const std::string& line = lines.front();
  try {
    const auto doc = nlohmann::json::parse(line);
    model->protocol_version_ = doc.at("protocol").get<int>();
    for (const auto& name : doc.at("features")) {
      model->features_.push_back(FeatureSchema::continuous(name.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpawnError("malformed handshake '" + line + "': " + e.what(),
                     pipes->diagnostics);
  }
  if (model->protocol_version_ != kBridgeProtocolVersion) {
    throw SpawnError("unsupported bridge protocol version " +
                         std::to_string(model->protocol_version_),
                     pipes->diagnostics);
  }
  if (model->features_.empty()) {
    throw SpawnError("handshake declares no features", pipes->diagnostics);
  }
  for (std::size_t i = 0; i < model->features_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (model->features_[i].name == model->features_[j].name) {
        throw SpawnError("handshake repeats feature '" +
                             model->features_[i].name + "'",
                         pipes->diagnostics);
      }
    }
  }
  // Anything after the handshake line stays buffered for the first reply.
  std::string pending;
  for (std::size_t i = 1; i < lines.size(); ++i) pending += lines[i] + "\n";
  pipes->out_buffer.insert(0, pending);
  model->command_ = std::move(command);
  model->timeout_ = timeout;
  model->pipes_ = std::move(pipes);
  return model;
}

std::vector<double> ExternalModel::predict(const Dataset& batch) const {
  // Bind handshake features by name.
  std::vector<std::size_t> columns;
  std::vector<std::string> missing, extra;
  std::vector<bool> used(batch.num_columns(), false);
  for (const auto& f : features_) {
    if (auto c = batch.find(f.name)) {
      columns.push_back(*c);
      used[*c] = true;
    } else {
      missing.push_back(f.name);
    }
  }
  for (std::size_t c = 0; c < batch.num_columns(); ++c) {
    if (!used[c]) extra.push_back(batch.feature(c).name);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "batch schema does not match external model features";
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
      return s;
    };
    if (!missing.empty()) msg += "; missing: " + join(missing);
    if (!extra.empty()) msg += "; extra: " + join(extra);
    throw ContractError(msg);
  }

  const std::size_t n = batch.num_rows();
  if (n == 0) return {};
  std::string request = "{\"n\":" + std::to_string(n) + "}\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) request += ',';
      request += csv_escape(batch.cell_text(r, columns[j]));
    }
    request += '\n';
  }

  std::lock_guard<std::mutex> lock(mutex_);
  if (!pipes_ || pipes_->in < 0) {
    throw ProtocolError("external model process is no longer available");
  }
  ++requests_;
  std::vector<std::string> lines;
  std::string error;
  const auto status = pipes_->exchange(request, n, lines,
                                       Clock::now() + timeout_, error);
  if (status == Pipes::Status::kTimeout) {
    const std::size_t got = lines.size();
    pipes_.reset();
    throw TimeoutError("external model replied with " + std::to_string(got) +
                           " of " + std::to_string(n) + " predictions within " +
                           std::to_string(timeout_.count()) + " ms",
                       got);
  }
  if (status == Pipes::Status::kEof) {
    pipes_->drain_stderr(Clock::now() + std::chrono::milliseconds(200));
    const std::string diag = pipes_->diagnostics;
    const std::size_t got = lines.size();
    pipes_.reset();
    throw ProtocolError("row-count mismatch: external model sent " +
                        std::to_string(got) + " of " + std::to_string(n) +
                        " prediction lines before closing" +
                        (error.empty() ? "" : " (" + error + ")") +
                        (diag.empty() ? "" : "; stderr: " + diag));
  }
  if (lines.size() > n) {
    // Replies beyond the request cannot be matched to any row.
    pipes_.reset();
    throw ProtocolError("row-count mismatch: external model sent more than " +
                        std::to_string(n) + " prediction lines");
  }

  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::string_view text = lines[r];
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
      text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
      text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      pipes_.reset();
      throw ProtocolError("non-numeric prediction line " +
                          std::to_string(r + 1) + ": '" + lines[r] + "'");
    }
    out[r] = v;
  }
  return out;
}

std::vector<std::string> split_command_line(std::string_view line) {
  std::vector<std::string> args;
  std::string current;
  bool in_token = false;
  char quote = 0;
  bool escaped = false;
  for (char c : line) {
    if (escaped) {
      current += c;
      in_token = true;
      escaped = false;
      continue;
    }
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"') {
        escaped = true;
      } else {
        current += c;
      }
      continue;
    }
    if (c == '\\') {
      escaped = true;
      in_token = true;
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) {
        args.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
    } else {
      current += c;
      in_token = true;
    }
  }
  if (quote) throw ParseError("unterminated quote in command line");
  if (escaped) throw ParseError("trailing backslash in command line");
  if (in_token) args.push_back(std::move(current));
  return args;
}

}  // namespace pdimp
