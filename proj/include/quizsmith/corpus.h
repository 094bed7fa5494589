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

#ifndef QUIZSMITH_CORPUS_H_
#define QUIZSMITH_CORPUS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "quizsmith/qa_pair.h"

namespace quizsmith {

enum class StyleLabel { kSquad, kNq, kNewsQa, kNewsQuizQa };

std::string_view StyleName(StyleLabel style);
// Throws DataError for names outside the closed set.
StyleLabel ParseStyle(std::string_view name);

struct SummaryRecord {
  std::string id;
  std::string summary;
  std::vector<QAPair> references;
  StyleLabel style = StyleLabel::kNewsQuizQa;

  friend bool operator==(const SummaryRecord&, const SummaryRecord&) = default;
};

using Corpus = std::vector<SummaryRecord>;

enum class PairViolation {
  kNoQuestionMark,
  kYesNoQuestion,
  kAnswerEndPunctuation,
  kBlocklistedPhrase,
  kEmptyField,
};

std::string_view PairViolationName(PairViolation violation);

// Question-side blocklist. Tokens match whole words and phrases match
// substrings; both are case-insensitive.
struct Blocklist {
  std::vector<std::string> tokens = {"i"};
  std::vector<std::string> phrases = {"according to the passage"};
};

std::vector<PairViolation> validate_pair(const QAPair& pair,
                                         const Blocklist& blocklist = {});

using GrammarHook = std::function<std::string(const std::string&)>;

// Hook applied to every question before validation; identity by default.
GrammarHook IdentityGrammarHook();

// Grammar hook, then rule filtering, then removal of the shortest question,
// then the exactly-four-references filter.
Corpus postprocess_corpus(const Corpus& records,
                          const GrammarHook& grammar_hook =
                              IdentityGrammarHook(),
                          const Blocklist& blocklist = {});

inline constexpr size_t kReferencesPerRecord = 4;

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

// 80/10/10 at record level, validation and test rounded to nearest and the
// remainder to train. Throws std::invalid_argument on an empty corpus.
SplitAssignment split_corpus(const Corpus& corpus, uint64_t seed);

// "Style <name>: <summary>"
std::string apply_style_prefix(const SummaryRecord& record);

struct TrainingPair {
  std::string record_id;
  size_t reference_index = 0;
  std::string input;
  QAPair target;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

// One example per (record, reference), uniformly shuffled with the seed.
std::vector<TrainingPair> disaggregate(const Corpus& corpus, uint64_t seed);

// One reference per record, chosen once from the seed.
std::vector<TrainingPair> sample_one(const Corpus& corpus, uint64_t seed);

// JSONL field names, so that releases with different keys can be ingested.
struct CorpusFieldMap {
  std::string id = "id";
  std::string summary = "summary";
  std::string style = "style";
  std::string references = "references";
  std::string question = "question";
  std::string answer = "answer";
};

SummaryRecord RecordFromJson(const nlohmann::json& line,
                             const CorpusFieldMap& fields = {});
nlohmann::json RecordToJson(const SummaryRecord& record);

// Reads one record per non-blank line. Missing style defaults to NewsQuizQA.
// Throws DataError with the line number on malformed input or duplicate ids.
Corpus ReadCorpus(std::istream& in, const CorpusFieldMap& fields = {});
void WriteCorpus(std::ostream& out, const Corpus& corpus);

nlohmann::json SplitToJson(const SplitAssignment& split);

}  // namespace quizsmith

#endif  // QUIZSMITH_CORPUS_H_
