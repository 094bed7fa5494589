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

#include "quizsmith/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include "quizsmith/error.h"
#include "quizsmith/text_metrics.h"

namespace quizsmith {
namespace {

constexpr std::array<std::string_view, 17> kYesNoOpeners = {
    "is",    "are",  "was",  "were",   "do",  "does",  "did",
    "can",   "could", "will", "would", "has", "have",  "had",
    "should", "may", "might"};

std::string Lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string_view Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

bool IsBlocklisted(std::string_view question, const Blocklist& blocklist) {
  const TokenSeq tokens = tokenize(question);
  for (const auto& word : blocklist.tokens) {
    if (std::find(tokens.begin(), tokens.end(), Lower(word)) != tokens.end()) {
      return true;
    }
  }
  const std::string lowered = Lower(question);
  return std::any_of(blocklist.phrases.begin(), blocklist.phrases.end(),
                     [&](const std::string& phrase) {
                       return lowered.find(Lower(phrase)) != std::string::npos;
                     });
}

std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

const nlohmann::json& Field(const nlohmann::json& object,
                            const std::string& key) {
  if (!object.is_object() || !object.contains(key)) {
    throw DataError("missing field \"" + key + "\"");
  }
  return object.at(key);
}

}  // namespace

std::string_view StyleName(StyleLabel style) {
  switch (style) {
    case StyleLabel::kSquad:
      return "SQuAD";
    case StyleLabel::kNq:
      return "NQ";
    case StyleLabel::kNewsQa:
      return "NewsQA";
    case StyleLabel::kNewsQuizQa:
      return "NewsQuizQA";
  }
  return "?";
}

StyleLabel ParseStyle(std::string_view name) {
  for (const auto style : {StyleLabel::kSquad, StyleLabel::kNq,
                           StyleLabel::kNewsQa, StyleLabel::kNewsQuizQa}) {
    if (StyleName(style) == name) return style;
  }
  throw DataError("unknown style label \"" + std::string(name) + "\"");
}

std::string_view PairViolationName(PairViolation violation) {
  switch (violation) {
    case PairViolation::kNoQuestionMark:
      return "NO_QUESTION_MARK";
    case PairViolation::kYesNoQuestion:
      return "YES_NO_QUESTION";
    case PairViolation::kAnswerEndPunctuation:
      return "ANSWER_END_PUNCTUATION";
    case PairViolation::kBlocklistedPhrase:
      return "BLOCKLISTED_PHRASE";
    case PairViolation::kEmptyField:
      return "EMPTY_FIELD";
  }
  return "?";
}

std::vector<PairViolation> validate_pair(const QAPair& pair,
                                         const Blocklist& blocklist) {
  std::vector<PairViolation> violations;
  const std::string_view question = Trim(pair.question);
  const std::string_view answer = Trim(pair.answer);
  if (question.empty() || answer.empty()) {
    violations.push_back(PairViolation::kEmptyField);
  }
  if (!question.empty()) {
    if (question.back() != '?') {
      violations.push_back(PairViolation::kNoQuestionMark);
    }
    const TokenSeq tokens = tokenize(question);
    if (!tokens.empty() &&
        std::find(kYesNoOpeners.begin(), kYesNoOpeners.end(), tokens[0]) !=
            kYesNoOpeners.end()) {
      violations.push_back(PairViolation::kYesNoQuestion);
    }
    if (IsBlocklisted(question, blocklist)) {
      violations.push_back(PairViolation::kBlocklistedPhrase);
    }
  }
  if (!answer.empty() &&
      std::string_view(".!?,;:").find(answer.back()) != std::string_view::npos) {
    violations.push_back(PairViolation::kAnswerEndPunctuation);
  }
  return violations;
}

GrammarHook IdentityGrammarHook() {
  return [](const std::string& text) { return text; };
}

Corpus postprocess_corpus(const Corpus& records,
                          const GrammarHook& grammar_hook,
                          const Blocklist& blocklist) {
  Corpus kept;
  for (const auto& record : records) {
    std::vector<QAPair> valid;
    for (const auto& reference : record.references) {
      QAPair corrected{grammar_hook(reference.question), reference.answer};
      if (validate_pair(corrected, blocklist).empty()) {
        valid.push_back(std::move(corrected));
      }
    }
    if (valid.size() > 1) {
      const auto shortest = std::min_element(
          valid.begin(), valid.end(), [](const QAPair& a, const QAPair& b) {
            return a.question.size() < b.question.size();
          });
      valid.erase(shortest);
    }
    if (valid.size() == kReferencesPerRecord) {
      SummaryRecord out = record;
      out.references = std::move(valid);
      kept.push_back(std::move(out));
    }
  }
  return kept;
}

SplitAssignment split_corpus(const Corpus& corpus, uint64_t seed) {
  if (corpus.empty()) {
    throw std::invalid_argument("split_corpus: empty corpus");
  }
  const size_t n = corpus.size();
  const size_t held_out = (n + 5) / 10;
  const auto order = ShuffledIndices(n, seed);
  SplitAssignment split;
  for (size_t rank = 0; rank < n; ++rank) {
    const std::string& id = corpus[order[rank]].id;
    if (rank < held_out) {
      split.validation.push_back(id);
    } else if (rank < 2 * held_out) {
      split.test.push_back(id);
    } else {
      split.train.push_back(id);
    }
  }
  return split;
}

std::string apply_style_prefix(const SummaryRecord& record) {
  return "Style " + std::string(StyleName(record.style)) + ": " +
         record.summary;
}

std::vector<TrainingPair> disaggregate(const Corpus& corpus, uint64_t seed) {
  std::vector<TrainingPair> pairs;
  for (const auto& record : corpus) {
    const std::string input = apply_style_prefix(record);
    for (size_t i = 0; i < record.references.size(); ++i) {
      pairs.push_back({record.id, i, input, record.references[i]});
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

std::vector<TrainingPair> sample_one(const Corpus& corpus, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingPair> pairs;
  for (const auto& record : corpus) {
    if (record.references.empty()) continue;
    std::uniform_int_distribution<size_t> pick(0, record.references.size() - 1);
    const size_t i = pick(rng);
    pairs.push_back(
        {record.id, i, apply_style_prefix(record), record.references[i]});
  }
  return pairs;
}

SummaryRecord RecordFromJson(const nlohmann::json& line,
                             const CorpusFieldMap& fields) {
  try {
    SummaryRecord record;
    const auto& id = Field(line, fields.id);
    record.id = id.is_string() ? id.get<std::string>() : id.dump();
    record.summary = Field(line, fields.summary).get<std::string>();
    if (line.contains(fields.style)) {
      record.style = ParseStyle(line.at(fields.style).get<std::string>());
    }
    for (const auto& ref : Field(line, fields.references)) {
      record.references.push_back(
          {Field(ref, fields.question).get<std::string>(),
           Field(ref, fields.answer).get<std::string>()});
    }
    if (record.references.empty()) {
      throw DataError("record \"" + record.id + "\" has no references");
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(e.what());
  }
}

nlohmann::json RecordToJson(const SummaryRecord& record) {
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& ref : record.references) {
    refs.push_back({{"question", ref.question}, {"answer", ref.answer}});
  }
  return {{"id", record.id},
          {"summary", record.summary},
          {"style", std::string(StyleName(record.style))},
          {"references", std::move(refs)}};
}

Corpus ReadCorpus(std::istream& in, const CorpusFieldMap& fields) {
  Corpus corpus;
  std::set<std::string> seen;
  std::string line;
  for (size_t number = 1; std::getline(in, line); ++number) {
    if (Trim(line).empty()) continue;
    try {
      SummaryRecord record = RecordFromJson(nlohmann::json::parse(line), fields);
      if (!seen.insert(record.id).second) {
        throw DataError("duplicate record id \"" + record.id + "\"");
      }
      corpus.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return corpus;
}

void WriteCorpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& record : corpus) out << RecordToJson(record).dump() << '\n';
}

nlohmann::json SplitToJson(const SplitAssignment& split) {
  return {{"train", split.train},
          {"validation", split.validation},
          {"test", split.test}};
}

}  // namespace quizsmith
