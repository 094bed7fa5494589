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

#include "quizsmith/qag_data.h"

#include <set>
#include <stdexcept>

namespace quizsmith {

Task ParseTask(std::string_view name) {
  if (name == "qag") return Task::kQag;
  if (name == "dg") return Task::kDistractor;
  throw std::invalid_argument("unknown task \"" + std::string(name) +
                              "\" (expected qag or dg)");
}

Vocab BuildVocab(const Corpus& corpus, Task task, const QaSplitConfig& split) {
  std::set<std::string> words;
  const auto add = [&](std::string_view text) {
    for (auto& token : tokenize(text)) words.insert(std::move(token));
  };
  for (const auto& record : corpus) {
    if (task == Task::kQag) add(apply_style_prefix(record));
    for (const auto& ref : record.references) {
      add(ref.question);
      add(ref.answer);
    }
  }
  std::vector<std::string> symbols(words.begin(), words.end());
  if (task == Task::kQag) symbols.push_back(split.separator);
  return Vocab(symbols);
}

TokenIds EncodeText(const Vocab& vocab, std::string_view text) {
  return vocab.encode_known(tokenize(text));
}

TokenIds EncodeQaTarget(const Vocab& vocab, const QAPair& pair,
                        const QaSplitConfig& split) {
  TokenIds ids = vocab.encode(tokenize(pair.question));
  ids.push_back(vocab.id(split.separator));
  for (const TokenId id : vocab.encode(tokenize(pair.answer))) {
    ids.push_back(id);
  }
  ids.push_back(vocab.eos());
  return ids;
}

TokenIds EncodeAnswerTarget(const Vocab& vocab, const QAPair& pair) {
  TokenIds ids = vocab.encode(tokenize(pair.answer));
  ids.push_back(vocab.eos());
  return ids;
}

std::vector<TrainingExample> BuildExamples(const Corpus& corpus,
                                           const Vocab& vocab, Task task,
                                           const QaSplitConfig& split) {
  std::vector<TrainingExample> examples;
  for (const auto& record : corpus) {
    if (task == Task::kQag) {
      TrainingExample example{record.id,
                              EncodeText(vocab, apply_style_prefix(record)),
                              {}};
      for (const auto& ref : record.references) {
        example.references.push_back(EncodeQaTarget(vocab, ref, split));
      }
      examples.push_back(std::move(example));
    } else {
      for (size_t i = 0; i < record.references.size(); ++i) {
        const auto& ref = record.references[i];
        examples.push_back({record.id + "#" + std::to_string(i),
                            EncodeText(vocab, ref.question),
                            {EncodeAnswerTarget(vocab, ref)}});
      }
    }
  }
  return examples;
}

}  // namespace quizsmith
