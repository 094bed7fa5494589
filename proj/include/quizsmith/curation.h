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

#ifndef QUIZSMITH_CURATION_H_
#define QUIZSMITH_CURATION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "quizsmith/distractors.h"
#include "quizsmith/seed.h"

namespace quizsmith {

inline constexpr size_t kBatchQuestions = 10;
inline constexpr size_t kBatchDistractors = 5;
inline constexpr size_t kPickedQuestions = 3;
inline constexpr size_t kPickedDistractors = 3;

enum class BatchStatus { kOpen, kCurated };

inline constexpr std::string_view kEditCategories[] = {
    "GRAMMAR_SPELLING", "CLARIFY_SOURCE_DATE", "DISTRACTOR_FORMATTING"};

// `target` addresses a text field of the batch:
//   questions/<i>/question, questions/<i>/key, questions/<i>/distractors/<j>
struct Edit {
  std::string target;
  std::string before;
  std::string after;
  std::string category;
};

struct Selection {
  size_t question = 0;
  std::vector<size_t> distractors;
};

struct CurationResult {
  std::string batch_id;
  std::vector<Selection> selections;
  std::vector<Edit> edits;
};

struct CurationBatch {
  std::string batch_id;
  uint64_t seed = 0;
  std::vector<McQuestion> candidates;
  BatchStatus status = BatchStatus::kOpen;
  std::optional<CurationResult> result;
};

struct Violation {
  std::string code;
  std::string detail;
};

// Throws DataError unless the batch holds exactly 10 questions with 5
// distractor candidates each.
void CheckBatchShape(const CurationBatch& batch);

// Pure rule check. Codes: BATCH_ID, PICK_COUNT, PICK_INDEX, EDIT_CATEGORY,
// EDIT_TARGET, EDIT_EMPTY, EDIT_BEFORE_MISMATCH.
std::vector<Violation> check_curation(const CurationBatch& batch,
                                      const CurationResult& result);

// Marks an open batch curated and attaches the result when no rule is
// broken. Throws std::logic_error for an already curated batch.
std::vector<Violation> validate_curation(CurationBatch& batch,
                                         const CurationResult& result);

struct QuizQuestion {
  std::string question;
  std::vector<std::string> options;
  size_t key_index = 0;
};

struct Quiz {
  std::string batch_id;
  std::vector<QuizQuestion> questions;
};

// Applies the edits and shuffles key plus chosen distractors with a seed
// derived from the batch seed and the question position. Requires a curated
// batch.
Quiz export_quiz(const CurationBatch& batch);

nlohmann::json BatchToJson(const CurationBatch& batch);
CurationBatch BatchFromJson(const nlohmann::json& json);
nlohmann::json ResultToJson(const CurationResult& result);
CurationResult ResultFromJson(const nlohmann::json& json);
nlohmann::json QuizToJson(const Quiz& quiz);
nlohmann::json ViolationsToJson(const std::vector<Violation>& violations);
std::string_view StatusName(BatchStatus status);

// Batches persisted as <data_dir>/<batch_id>.json. Writes to one batch are
// serialized; reads never see a partially written file.
class BatchStore {
 public:
  explicit BatchStore(std::filesystem::path data_dir);

  static bool ValidBatchId(std::string_view id);

  std::vector<std::pair<std::string, BatchStatus>> list() const;
  std::optional<CurationBatch> load(std::string_view batch_id) const;
  void save(const CurationBatch& batch);

  enum class Outcome { kAccepted, kNotFound, kAlreadyCurated, kRejected };
  struct CurateResponse {
    Outcome outcome;
    std::vector<Violation> violations;
  };
  CurateResponse curate(std::string_view batch_id,
                        const CurationResult& result);

 private:
  std::filesystem::path PathFor(std::string_view batch_id) const;
  std::mutex& LockFor(std::string_view batch_id);

  std::filesystem::path data_dir_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>, std::less<>> locks_;
};

}  // namespace quizsmith

#endif  // QUIZSMITH_CURATION_H_
