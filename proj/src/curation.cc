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

#include "quizsmith/curation.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "quizsmith/error.h"

namespace quizsmith {
namespace {

namespace fs = std::filesystem;

struct Target {
  size_t question = 0;
  enum class Field { kQuestion, kKey, kDistractor } field = Field::kQuestion;
  size_t distractor = 0;
};

std::optional<size_t> ParseIndex(std::string_view text) {
  size_t value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> SplitPath(std::string_view path) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t slash = path.find('/', start);
    parts.push_back(path.substr(start, slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

std::optional<Target> ParseTarget(std::string_view path) {
  const auto parts = SplitPath(path);
  if (parts.size() < 3 || parts[0] != "questions") return std::nullopt;
  const auto question = ParseIndex(parts[1]);
  if (!question) return std::nullopt;
  if (parts.size() == 3 && parts[2] == "question") {
    return Target{*question, Target::Field::kQuestion, 0};
  }
  if (parts.size() == 3 && parts[2] == "key") {
    return Target{*question, Target::Field::kKey, 0};
  }
  if (parts.size() == 4 && parts[2] == "distractors") {
    if (const auto d = ParseIndex(parts[3])) {
      return Target{*question, Target::Field::kDistractor, *d};
    }
  }
  return std::nullopt;
}

std::string* TextAt(std::vector<McQuestion>& questions, const Target& t) {
  if (t.question >= questions.size()) return nullptr;
  McQuestion& q = questions[t.question];
  switch (t.field) {
    case Target::Field::kQuestion:
      return &q.question;
    case Target::Field::kKey:
      return &q.key;
    case Target::Field::kDistractor:
      return t.distractor < q.distractors.size() ? &q.distractors[t.distractor]
                                                 : nullptr;
  }
  return nullptr;
}

bool IsSelected(const CurationResult& result, const Target& t) {
  for (const auto& s : result.selections) {
    if (s.question != t.question) continue;
    if (t.field != Target::Field::kDistractor) return true;
    return std::find(s.distractors.begin(), s.distractors.end(),
                     t.distractor) != s.distractors.end();
  }
  return false;
}

bool IsBlank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

template <typename T>
T Get(const nlohmann::json& json, const char* key) {
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace

void CheckBatchShape(const CurationBatch& batch) {
  if (batch.candidates.size() != kBatchQuestions) {
    throw DataError("batch \"" + batch.batch_id + "\" has " +
                    std::to_string(batch.candidates.size()) +
                    " questions, expected 10");
  }
  for (const auto& q : batch.candidates) {
    if (q.distractors.size() != kBatchDistractors) {
      throw DataError("batch \"" + batch.batch_id +
                      "\" has a question with " +
                      std::to_string(q.distractors.size()) +
                      " distractor candidates, expected 5");
    }
  }
}

std::vector<Violation> check_curation(const CurationBatch& batch,
                                      const CurationResult& result) {
  std::vector<Violation> violations;
  if (result.batch_id != batch.batch_id) {
    violations.push_back({"BATCH_ID", "result is for batch \"" +
                                          result.batch_id + "\""});
  }
  if (result.selections.size() != kPickedQuestions) {
    violations.push_back(
        {"PICK_COUNT", std::to_string(result.selections.size()) +
                           " questions picked, exactly 3 required"});
  }
  std::set<size_t> questions;
  for (const auto& s : result.selections) {
    if (s.question >= batch.candidates.size() ||
        !questions.insert(s.question).second) {
      violations.push_back({"PICK_INDEX", "question " +
                                              std::to_string(s.question) +
                                              " is out of range or repeated"});
      continue;
    }
    if (s.distractors.size() != kPickedDistractors) {
      violations.push_back(
          {"PICK_COUNT", std::to_string(s.distractors.size()) +
                             " distractors picked for question " +
                             std::to_string(s.question) +
                             ", exactly 3 required"});
    }
    std::set<size_t> distractors;
    for (const size_t d : s.distractors) {
      if (d >= batch.candidates[s.question].distractors.size() ||
          !distractors.insert(d).second) {
        violations.push_back(
            {"PICK_INDEX", "distractor " + std::to_string(d) +
                               " of question " + std::to_string(s.question) +
                               " is out of range or repeated"});
      }
    }
  }

  std::vector<McQuestion> working = batch.candidates;
  for (const auto& edit : result.edits) {
    if (std::find(std::begin(kEditCategories), std::end(kEditCategories),
                  edit.category) == std::end(kEditCategories)) {
      violations.push_back(
          {"EDIT_CATEGORY", "edit category \"" + edit.category +
                                "\" is not one of the allowed three"});
    }
    if (IsBlank(edit.after)) {
      violations.push_back({"EDIT_EMPTY", "edit of \"" + edit.target +
                                              "\" leaves empty text"});
    }
    const auto target = ParseTarget(edit.target);
    std::string* text = target ? TextAt(working, *target) : nullptr;
    if (!text || !IsSelected(result, *target)) {
      violations.push_back({"EDIT_TARGET", "\"" + edit.target +
                                               "\" is not a selected item"});
      continue;
    }
    if (*text != edit.before) {
      violations.push_back(
          {"EDIT_BEFORE_MISMATCH",
           "\"" + edit.target + "\" does not currently read \"" +
               edit.before + "\""});
      continue;
    }
    *text = edit.after;
  }
  return violations;
}

std::vector<Violation> validate_curation(CurationBatch& batch,
                                         const CurationResult& result) {
  if (batch.status != BatchStatus::kOpen) {
    throw std::logic_error("batch \"" + batch.batch_id +
                           "\" is already curated");
  }
  auto violations = check_curation(batch, result);
  if (violations.empty()) {
    batch.status = BatchStatus::kCurated;
    batch.result = result;
  }
  return violations;
}

Quiz export_quiz(const CurationBatch& batch) {
  if (batch.status != BatchStatus::kCurated || !batch.result) {
    throw std::logic_error("batch \"" + batch.batch_id + "\" is not curated");
  }
  std::vector<McQuestion> edited = batch.candidates;
  for (const auto& edit : batch.result->edits) {
    if (const auto target = ParseTarget(edit.target)) {
      if (std::string* text = TextAt(edited, *target)) *text = edit.after;
    }
  }
  Quiz quiz{batch.batch_id, {}};
  for (size_t position = 0; position < batch.result->selections.size();
       ++position) {
    const Selection& s = batch.result->selections[position];
    const McQuestion& q = edited.at(s.question);
    std::vector<size_t> order(1 + s.distractors.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(DeriveSeed(batch.seed, position));
    std::shuffle(order.begin(), order.end(), rng);
    QuizQuestion out{q.question, {}, 0};
    for (size_t slot = 0; slot < order.size(); ++slot) {
      if (order[slot] == 0) {
        out.key_index = slot;
        out.options.push_back(q.key);
      } else {
        out.options.push_back(q.distractors.at(s.distractors[order[slot] - 1]));
      }
    }
    quiz.questions.push_back(std::move(out));
  }
  return quiz;
}

std::string_view StatusName(BatchStatus status) {
  return status == BatchStatus::kOpen ? "open" : "curated";
}

nlohmann::json ResultToJson(const CurationResult& result) {
  nlohmann::json selections = nlohmann::json::array();
  for (const auto& s : result.selections) {
    selections.push_back(
        {{"question", s.question}, {"distractors", s.distractors}});
  }
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : result.edits) {
    edits.push_back({{"target", e.target},
                     {"before", e.before},
                     {"after", e.after},
                     {"category", e.category}});
  }
  return {{"batch_id", result.batch_id},
          {"selections", std::move(selections)},
          {"edits", std::move(edits)}};
}

CurationResult ResultFromJson(const nlohmann::json& json) {
  CurationResult result;
  result.batch_id = Get<std::string>(json, "batch_id");
  for (const auto& s : Get<nlohmann::json>(json, "selections")) {
    result.selections.push_back({Get<size_t>(s, "question"),
                                 Get<std::vector<size_t>>(s, "distractors")});
  }
  if (json.contains("edits")) {
    for (const auto& e : json.at("edits")) {
      result.edits.push_back(
          {Get<std::string>(e, "target"), Get<std::string>(e, "before"),
           Get<std::string>(e, "after"), Get<std::string>(e, "category")});
    }
  }
  return result;
}

nlohmann::json BatchToJson(const CurationBatch& batch) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& q : batch.candidates) {
    candidates.push_back({{"question", q.question},
                          {"key", q.key},
                          {"distractors", q.distractors}});
  }
  nlohmann::json json = {{"batch_id", batch.batch_id},
                         {"seed", batch.seed},
                         {"status", std::string(StatusName(batch.status))},
                         {"candidates", std::move(candidates)}};
  if (batch.result) json["result"] = ResultToJson(*batch.result);
  return json;
}

CurationBatch BatchFromJson(const nlohmann::json& json) {
  CurationBatch batch;
  batch.batch_id = Get<std::string>(json, "batch_id");
  batch.seed = json.value("seed", uint64_t{0});
  const auto status = json.value("status", std::string("open"));
  if (status != "open" && status != "curated") {
    throw DataError("unknown batch status \"" + status + "\"");
  }
  batch.status = status == "open" ? BatchStatus::kOpen : BatchStatus::kCurated;
  for (const auto& q : Get<nlohmann::json>(json, "candidates")) {
    batch.candidates.push_back(
        {Get<std::string>(q, "question"), Get<std::string>(q, "key"),
         Get<std::vector<std::string>>(q, "distractors")});
  }
  if (json.contains("result")) batch.result = ResultFromJson(json.at("result"));
  if (batch.status == BatchStatus::kCurated && !batch.result) {
    throw DataError("curated batch \"" + batch.batch_id + "\" has no result");
  }
  CheckBatchShape(batch);
  return batch;
}

nlohmann::json QuizToJson(const Quiz& quiz) {
  nlohmann::json questions = nlohmann::json::array();
  for (const auto& q : quiz.questions) {
    questions.push_back({{"question", q.question},
                         {"options", q.options},
                         {"key_index", q.key_index}});
  }
  return {{"batch_id", quiz.batch_id}, {"questions", std::move(questions)}};
}

nlohmann::json ViolationsToJson(const std::vector<Violation>& violations) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : violations) {
    out.push_back({{"code", v.code}, {"detail", v.detail}});
  }
  return out;
}

BatchStore::BatchStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  fs::create_directories(data_dir_);
}

bool BatchStore::ValidBatchId(std::string_view id) {
  return !id.empty() && id.size() <= 128 &&
         std::all_of(id.begin(), id.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                  c == '_' || c == '.';
         }) &&
         id.front() != '.';
}

fs::path BatchStore::PathFor(std::string_view batch_id) const {
  return data_dir_ / (std::string(batch_id) + ".json");
}

std::mutex& BatchStore::LockFor(std::string_view batch_id) {
  std::lock_guard<std::mutex> guard(locks_mutex_);
  auto it = locks_.find(batch_id);
  if (it == locks_.end()) {
    it = locks_.emplace(std::string(batch_id), std::make_unique<std::mutex>())
             .first;
  }
  return *it->second;
}

std::vector<std::pair<std::string, BatchStatus>> BatchStore::list() const {
  std::vector<std::pair<std::string, BatchStatus>> batches;
  for (const auto& entry : fs::directory_iterator(data_dir_)) {
    if (entry.path().extension() != ".json") continue;
    const std::string id = entry.path().stem().string();
    if (!ValidBatchId(id)) continue;
    if (auto batch = load(id)) batches.emplace_back(id, batch->status);
  }
  std::sort(batches.begin(), batches.end());
  return batches;
}

std::optional<CurationBatch> BatchStore::load(std::string_view batch_id) const {
  if (!ValidBatchId(batch_id)) return std::nullopt;
  std::ifstream in(PathFor(batch_id));
  if (!in) return std::nullopt;
  try {
    return BatchFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("batch file for \"" + std::string(batch_id) +
                    "\" is not valid JSON: " + e.what());
  }
}

void BatchStore::save(const CurationBatch& batch) {
  if (!ValidBatchId(batch.batch_id)) {
    throw DataError("invalid batch id \"" + batch.batch_id + "\"");
  }
  CheckBatchShape(batch);
  const fs::path path = PathFor(batch.batch_id);
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    out << BatchToJson(batch).dump(2) << '\n';
    if (!out) throw DataError("cannot write " + temp.string());
  }
  fs::rename(temp, path);
}

BatchStore::CurateResponse BatchStore::curate(std::string_view batch_id,
                                              const CurationResult& result) {
  if (!ValidBatchId(batch_id)) return {Outcome::kNotFound, {}};
  std::lock_guard<std::mutex> guard(LockFor(batch_id));
  auto batch = load(batch_id);
  if (!batch) return {Outcome::kNotFound, {}};
  if (batch->status != BatchStatus::kOpen) {
    return {Outcome::kAlreadyCurated, {}};
  }
  auto violations = validate_curation(*batch, result);
  if (!violations.empty()) return {Outcome::kRejected, std::move(violations)};
  save(*batch);
  return {Outcome::kAccepted, {}};
}

}  // namespace quizsmith
