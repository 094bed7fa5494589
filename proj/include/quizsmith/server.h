// Copyright 2026 The Quizsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUIZSMITH_SERVER_H_
#define QUIZSMITH_SERVER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "quizsmith/curation.h"

namespace httplib {
class Server;
}

namespace quizsmith {

// JSON API over a BatchStore:
//   GET  /api/batches                 -> [{"batch_id", "status"}]
//   GET  /api/batches/{id}            -> batch document
//   POST /api/batches/{id}/curation   -> 200 | 404 | 409 | 422
//   GET  /api/batches/{id}/export     -> quiz document (409 until curated)
// plus the static UI bundle from ui_dir, when given, at "/".
class CurationServer {
 public:
  CurationServer(std::filesystem::path data_dir,
                 std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~CurationServer();

  CurationServer(const CurationServer&) = delete;
  CurationServer& operator=(const CurationServer&) = delete;

  // Blocks until stop(). Returns false when the port cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1. Follow with
  // listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool is_running() const;

 private:
  void Routes();

  BatchStore store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace quizsmith

#endif  // QUIZSMITH_SERVER_H_
