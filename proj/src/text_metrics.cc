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

#include "quizsmith/text_metrics.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace quizsmith {
namespace {

using NGramCounts = std::map<std::vector<std::string>, int>;

NGramCounts CountNGrams(const TokenSeq& tokens, int n) {
  NGramCounts counts;
  const auto size = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= size; ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

RougeScore FromCounts(int overlap, int candidate_total, int reference_total) {
  RougeScore score;
  if (candidate_total > 0) {
    score.precision = static_cast<double>(overlap) / candidate_total;
  }
  if (reference_total > 0) {
    score.recall = static_cast<double>(overlap) / reference_total;
  }
  score.f1 = harmonic_mean(score.precision, score.recall);
  return score;
}

int LcsLength(const TokenSeq& a, const TokenSeq& b) {
  std::vector<int> row(b.size() + 1, 0);
  for (const auto& token : a) {
    int diagonal = 0;
    for (size_t j = 1; j <= b.size(); ++j) {
      const int above = row[j];
      row[j] = token == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
      diagonal = above;
    }
  }
  return row.back();
}

std::string Trimmed(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace

std::string_view RougeVariantName(RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kRouge1:
      return "R1";
    case RougeVariant::kRouge2:
      return "R2";
    case RougeVariant::kRougeL:
      return "RL";
  }
  return "?";
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::string current;
  for (const char c : text) {
    const auto byte = static_cast<unsigned char>(c);
    if (std::isalnum(byte)) {
      current.push_back(static_cast<char>(std::tolower(byte)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double harmonic_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference,
                   int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  const auto candidate_counts = CountNGrams(candidate, n);
  const auto reference_counts = CountNGrams(reference, n);
  int overlap = 0;
  for (const auto& [gram, count] : candidate_counts) {
    if (auto it = reference_counts.find(gram); it != reference_counts.end()) {
      overlap += std::min(count, it->second);
    }
  }
  const int candidate_total =
      std::max(0, static_cast<int>(candidate.size()) - n + 1);
  const int reference_total =
      std::max(0, static_cast<int>(reference.size()) - n + 1);
  return FromCounts(overlap, candidate_total, reference_total);
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  return FromCounts(LcsLength(candidate, reference),
                    static_cast<int>(candidate.size()),
                    static_cast<int>(reference.size()));
}

RougeScore rouge(const TokenSeq& candidate, const TokenSeq& reference,
                 RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kRouge1:
      return rouge_n(candidate, reference, 1);
    case RougeVariant::kRouge2:
      return rouge_n(candidate, reference, 2);
    case RougeVariant::kRougeL:
      return rouge_l(candidate, reference);
  }
  throw std::invalid_argument("unknown ROUGE variant");
}

RougeScore rouge_multi(const TokenSeq& candidate,
                       std::span<const TokenSeq> references,
                       RougeVariant variant) {
  if (references.empty()) {
    throw std::invalid_argument("rouge_multi: empty reference list");
  }
  RougeScore best = rouge(candidate, references.front(), variant);
  for (const auto& reference : references.subspan(1)) {
    const RougeScore score = rouge(candidate, reference, variant);
    if (score.f1 > best.f1) best = score;
  }
  return best;
}

std::optional<std::pair<std::string, std::string>> split_prediction(
    std::string_view prediction, const QaSplitConfig& config) {
  if (config.separator.empty()) {
    throw std::invalid_argument("QaSplitConfig: empty separator");
  }
  const auto at = prediction.find(config.separator);
  if (at == std::string_view::npos) return std::nullopt;
  return std::make_pair(
      Trimmed(prediction.substr(0, at)),
      Trimmed(prediction.substr(at + config.separator.size())));
}

std::string join_pair(const QAPair& pair, const QaSplitConfig& config) {
  return pair.question + " " + config.separator + " " + pair.answer;
}

std::string strip_separator(std::string_view text,
                            const QaSplitConfig& config) {
  std::string out(text);
  if (config.separator.empty()) return out;
  for (auto at = out.find(config.separator); at != std::string::npos;
       at = out.find(config.separator, at + 1)) {
    out.replace(at, config.separator.size(), " ");
  }
  return out;
}

double rouge_qag(std::string_view prediction,
                 std::span<const QAPair> references, RougeVariant variant,
                 const QaSplitConfig& config) {
  if (references.empty()) {
    throw std::invalid_argument("rouge_qag: empty reference list");
  }
  const auto parts = split_prediction(prediction, config);
  if (!parts) return 0.0;
  const TokenSeq question = tokenize(parts->first);
  const TokenSeq answer = tokenize(parts->second);
  double best = 0.0;
  for (const auto& reference : references) {
    const double q = rouge(question, tokenize(reference.question), variant).f1;
    const double a = rouge(answer, tokenize(reference.answer), variant).f1;
    best = std::max(best, harmonic_mean(q, a));
  }
  return best;
}

double rouge_combined(std::string_view prediction,
                      std::span<const QAPair> references,
                      RougeVariant variant, const QaSplitConfig& config) {
  if (references.empty()) {
    throw std::invalid_argument("rouge_combined: empty reference list");
  }
  std::vector<TokenSeq> targets;
  targets.reserve(references.size());
  for (const auto& reference : references) {
    targets.push_back(
        tokenize(strip_separator(join_pair(reference, config), config)));
  }
  return rouge_multi(tokenize(strip_separator(prediction, config)), targets,
                     variant)
      .f1;
}

}  // namespace quizsmith
