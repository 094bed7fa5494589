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

#ifndef QUIZSMITH_QAG_DATA_H_
#define QUIZSMITH_QAG_DATA_H_

#include <string>
#include <string_view>
#include <vector>

#include "quizsmith/corpus.h"
#include "quizsmith/multiref.h"
#include "quizsmith/text_metrics.h"
#include "quizsmith/toy_model.h"

namespace quizsmith {

// QAG: style-prefixed summary -> "question <sep> answer".
// DG: question -> answer, the closed-book setting used to sample distractors.
enum class Task { kQag, kDistractor };

Task ParseTask(std::string_view name);

// Sorted word types of every input and target, plus the separator for QAG.
Vocab BuildVocab(const Corpus& corpus, Task task,
                 const QaSplitConfig& split = {});

// Unknown words are dropped.
TokenIds EncodeText(const Vocab& vocab, std::string_view text);

// Target ids ending in <eos>. Throws std::out_of_range on unknown words.
TokenIds EncodeQaTarget(const Vocab& vocab, const QAPair& pair,
                        const QaSplitConfig& split = {});
TokenIds EncodeAnswerTarget(const Vocab& vocab, const QAPair& pair);

// QAG: one example per record holding all of its references.
// DG: one single-reference example per (record, reference).
std::vector<TrainingExample> BuildExamples(const Corpus& corpus,
                                           const Vocab& vocab, Task task,
                                           const QaSplitConfig& split = {});

}  // namespace quizsmith

#endif  // QUIZSMITH_QAG_DATA_H_
