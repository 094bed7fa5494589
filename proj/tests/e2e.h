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

#ifndef QUIZSMITH_TESTS_E2E_H_
#define QUIZSMITH_TESTS_E2E_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "quizsmith/cli.h"
#include "quizsmith/server.h"
// After Eigen: httplib pulls in <resolv.h>, whose `_res` macro breaks Eigen.
#include "httplib.h"

namespace quizsmith::testing {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline void MustRun(const std::vector<std::string>& args) {
  const auto r = RunCli(args);
  if (r.code != 0) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    throw std::runtime_error("`" + joined + "` exited " +
                             std::to_string(r.code) + ": " + r.err);
  }
}

// Runs the shipped fixtures through every stage and returns the exported
// quiz from the HTTP API after a scripted curation.
inline nlohmann::json RunEndToEnd(const std::filesystem::path& fixtures,
                                  const std::filesystem::path& work) {
  const auto p = [&](const char* name) { return (work / name).string(); };
  MustRun({"--seed", "3", "pipeline", "--in",
           (fixtures / "corpus.jsonl").string(), "--out-dir", p("pipeline")});
  MustRun({"--seed", "3", "train-demo", "--corpus", p("pipeline/corpus.jsonl"),
           "--split", p("pipeline/split.json"), "--task", "qag", "--strategy",
           "min-ref", "--steps", "300", "--lr", "0.5", "--params-out",
           p("qag.json"), "--trace", p("qag_trace.jsonl")});
  MustRun({"--seed", "3", "train-demo", "--corpus", p("pipeline/corpus.jsonl"),
           "--split", p("pipeline/split.json"), "--task", "dg", "--strategy",
           "min-ref", "--steps", "300", "--lr", "0.5", "--params-out",
           p("dg.json"), "--trace", p("dg_trace.jsonl")});
  MustRun({"--seed", "3", "decode", "--params", p("qag.json"), "--in",
           p("pipeline/corpus.jsonl"), "--out", p("predictions.jsonl")});
  MustRun({"--seed", "3", "decode", "--params", p("dg.json"), "--in",
           p("predictions.jsonl"), "--mode", "candidates", "--k", "5",
           "--temperature", "1.5", "--out", p("candidates.jsonl")});
  MustRun({"--seed", "3", "distract", "--in", p("candidates.jsonl"), "--k",
           "5", "--skip-insufficient", "--batch-id", "e2e", "--data-dir",
           p("data"), "--out", p("mcq.jsonl")});

  CurationServer server(work / "data");
  const int port = server.bind_any_port("127.0.0.1");
  if (port <= 0) throw std::runtime_error("cannot bind a loopback port");
  std::thread thread([&] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::yield();

  nlohmann::json quiz;
  std::string failure;
  try {
    httplib::Client client("127.0.0.1", port);
    auto r = client.Get("/api/batches/e2e");
    if (!r || r->status != 200) throw std::runtime_error("batch not served");
    const auto batch = nlohmann::json::parse(r->body);
    const auto& c = batch.at("candidates");
    const auto text = [&](int q, const char* field) {
      return c.at(q).at(field).get<std::string>();
    };
    const std::string d = c.at(2).at("distractors").at(0).get<std::string>();
    const nlohmann::json curation = {
        {"batch_id", "e2e"},
        {"selections",
         {{{"question", 0}, {"distractors", {0, 1, 2}}},
          {{"question", 1}, {"distractors", {2, 3, 4}}},
          {{"question", 2}, {"distractors", {0, 2, 4}}}}},
        {"edits",
         {{{"target", "questions/0/question"},
           {"before", text(0, "question")},
           {"after", text(0, "question") + "?"},
           {"category", "GRAMMAR_SPELLING"}},
          {{"target", "questions/1/question"},
           {"before", text(1, "question")},
           {"after", text(1, "question") + " this week?"},
           {"category", "CLARIFY_SOURCE_DATE"}},
          {{"target", "questions/2/distractors/0"},
           {"before", d},
           {"after", d + "."},
           {"category", "DISTRACTOR_FORMATTING"}}}}};
    r = client.Post("/api/batches/e2e/curation", curation.dump(),
                    "application/json");
    if (!r || r->status != 200) {
      throw std::runtime_error("curation rejected: " + (r ? r->body : ""));
    }
    r = client.Get("/api/batches/e2e/export");
    if (!r || r->status != 200) throw std::runtime_error("export failed");
    quiz = nlohmann::json::parse(r->body);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  server.stop();
  thread.join();
  if (!failure.empty()) throw std::runtime_error(failure);
  return quiz;
}

// Empty when the quiz has 3 questions of 4 distinct options with the key
// present exactly once at key_index.
inline std::string QuizProblem(const nlohmann::json& quiz) {
  if (!quiz.contains("questions") || quiz.at("questions").size() != 3) {
    return "quiz does not have 3 questions";
  }
  for (const auto& q : quiz.at("questions")) {
    if (!q.at("question").is_string() || q.at("question").get<std::string>().empty()) {
      return "empty question text";
    }
    const auto options = q.at("options").get<std::vector<std::string>>();
    if (options.size() != 4) return "question without 4 options";
    const auto key = q.at("key_index").get<size_t>();
    if (key >= options.size()) return "key index out of range";
    for (size_t i = 0; i < options.size(); ++i) {
      for (size_t j = i + 1; j < options.size(); ++j) {
        if (options[i] == options[j]) return "duplicate options";
      }
    }
  }
  return {};
}

}  // namespace quizsmith::testing

#endif  // QUIZSMITH_TESTS_E2E_H_
