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

#include "quizsmith/server.h"

#include "httplib.h"
#include "quizsmith/error.h"

namespace quizsmith {
namespace {

constexpr char kJson[] = "application/json";

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void Error(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, {{"error", message}});
}

}  // namespace

CurationServer::CurationServer(std::filesystem::path data_dir,
                               std::optional<std::filesystem::path> ui_dir)
    : store_(std::move(data_dir)), http_(std::make_unique<httplib::Server>()) {
  Routes();
  if (ui_dir) http_->set_mount_point("/", ui_dir->string());
}

CurationServer::~CurationServer() = default;

void CurationServer::Routes() {
  http_->Get("/api/batches", [this](const httplib::Request&,
                                    httplib::Response& res) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [id, status] : store_.list()) {
      out.push_back({{"batch_id", id}, {"status", StatusName(status)}});
    }
    Reply(res, 200, out);
  });

  http_->Get(R"(/api/batches/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               const auto batch = store_.load(req.matches[1].str());
               if (!batch) return Error(res, 404, "unknown batch");
               Reply(res, 200, BatchToJson(*batch));
             });

  http_->Post(R"(/api/batches/([^/]+)/curation)",
              [this](const httplib::Request& req, httplib::Response& res) {
                CurationResult result;
                try {
                  result = ResultFromJson(nlohmann::json::parse(req.body));
                } catch (const std::exception& e) {
                  return Error(res, 400, e.what());
                }
                const auto response =
                    store_.curate(req.matches[1].str(), result);
                switch (response.outcome) {
                  case BatchStore::Outcome::kAccepted:
                    return Reply(res, 200, {{"status", "curated"}});
                  case BatchStore::Outcome::kNotFound:
                    return Error(res, 404, "unknown batch");
                  case BatchStore::Outcome::kAlreadyCurated:
                    return Error(res, 409, "batch already curated");
                  case BatchStore::Outcome::kRejected:
                    return Reply(
                        res, 422,
                        {{"violations", ViolationsToJson(response.violations)}});
                }
              });

  http_->Get(R"(/api/batches/([^/]+)/export)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const auto batch = store_.load(req.matches[1].str());
               if (!batch) return Error(res, 404, "unknown batch");
               if (batch->status != BatchStatus::kCurated) {
                 return Error(res, 409, "batch not curated yet");
               }
               Reply(res, 200, QuizToJson(export_quiz(*batch)));
             });

  http_->set_exception_handler([](const httplib::Request&,
                                  httplib::Response& res,
                                  std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      Error(res, 500, e.what());
    } catch (...) {
      Error(res, 500, "internal error");
    }
  });
}

bool CurationServer::listen(const std::string& host, int port) {
  return http_->listen(host, port);
}

int CurationServer::bind_any_port(const std::string& host) {
  return http_->bind_to_any_port(host);
}

bool CurationServer::listen_after_bind() { return http_->listen_after_bind(); }

void CurationServer::stop() { http_->stop(); }

bool CurationServer::is_running() const { return http_->is_running(); }

}  // namespace quizsmith
