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

#ifndef QUIZSMITH_TEXT_METRICS_H_
#define QUIZSMITH_TEXT_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quizsmith/qa_pair.h"

namespace quizsmith {

// Lowercase word tokens, never empty strings.
using TokenSeq = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

std::string_view RougeVariantName(RougeVariant variant);

struct QaSplitConfig {
  std::string separator = "<sep>";
};

// Lowercases and splits on every non-alphanumeric byte. No stemming.
TokenSeq tokenize(std::string_view text);

// Harmonic mean, defined as 0 when either operand is 0.
double harmonic_mean(double a, double b);

// Multiset n-gram overlap. Requires n >= 1.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference,
                   int n);

// Sentence-level LCS.
RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

RougeScore rouge(const TokenSeq& candidate, const TokenSeq& reference,
                 RougeVariant variant);

// Best F1 over references; ties go to the lowest reference index.
// Throws std::invalid_argument on an empty reference list.
RougeScore rouge_multi(const TokenSeq& candidate,
                       std::span<const TokenSeq> references,
                       RougeVariant variant);

// Splits at the first occurrence of the separator. Returns nullopt when the
// separator is absent.
std::optional<std::pair<std::string, std::string>> split_prediction(
    std::string_view prediction, const QaSplitConfig& config);

// The single output sequence a QAG model is trained to emit for a pair.
std::string join_pair(const QAPair& pair, const QaSplitConfig& config);

// Replaces every separator occurrence with a space, so that plain ROUGE on a
// combined sequence does not count the separator as a matching word.
std::string strip_separator(std::string_view text,
                            const QaSplitConfig& config);

// Per reference: harmonic mean of question and answer ROUGE-F, maximized
// over references. 0 when the prediction does not split.
double rouge_qag(std::string_view prediction,
                 std::span<const QAPair> references, RougeVariant variant,
                 const QaSplitConfig& config = {});

// Plain ROUGE-F of a combined prediction against combined references, with
// separators removed from both sides.
double rouge_combined(std::string_view prediction,
                      std::span<const QAPair> references,
                      RougeVariant variant, const QaSplitConfig& config = {});

}  // namespace quizsmith

#endif  // QUIZSMITH_TEXT_METRICS_H_
