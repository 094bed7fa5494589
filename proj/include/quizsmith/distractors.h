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

#ifndef QUIZSMITH_DISTRACTORS_H_
#define QUIZSMITH_DISTRACTORS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "quizsmith/decoding.h"
#include "quizsmith/error.h"
#include "quizsmith/toy_model.h"

namespace quizsmith {

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Unit-length vector, or all zeros for degenerate input.
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Hashed character trigrams of "^" + lowercase(text) + "$".
class TrigramEmbedder : public Embedder {
 public:
  explicit TrigramEmbedder(int dim = 256);
  std::vector<double> embed(std::string_view text) const override;
  int dim() const { return dim_; }

  // Bucket index of a single trigram.
  size_t bucket(std::string_view trigram) const;

 private:
  int dim_;
};

// Runs `command` with the text on stdin and parses a JSON array of numbers
// from its stdout. The result is L2-normalized.
class CommandEmbedder : public Embedder {
 public:
  explicit CommandEmbedder(std::string command);
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::string command_;
};

double cosine_distance(const std::vector<double>& a,
                       const std::vector<double>& b);

struct McQuestion {
  std::string question;
  std::string key;
  std::vector<std::string> distractors;
};

class InsufficientCandidatesError : public DataError {
 public:
  InsufficientCandidatesError(size_t survivors, size_t wanted);
  size_t survivors() const { return survivors_; }

 private:
  size_t survivors_;
};

// Lowercase, surrounding whitespace removed.
std::string NormalizeOption(std::string_view text);

// Indices of candidates that are non-empty and differ from the key and from
// every earlier candidate after NormalizeOption.
std::vector<size_t> prefilter_candidates(
    std::string_view key, const std::vector<std::string>& candidates);

// Greedy max-min selection over points 0..n where point 0 is the key and
// points 1..n are candidates. Each round picks the candidate whose minimum
// distance to the chosen set (key included) is largest; ties go to the
// lower index. Returns selected candidate positions (0-based, excluding the
// key).
std::vector<size_t> greedy_max_min(
    size_t candidates, size_t k,
    const std::function<double(size_t, size_t)>& distance);

// Throws InsufficientCandidatesError when fewer than k candidates survive
// the pre-filter.
std::vector<std::string> select_distractors(
    std::string_view key, const std::vector<std::string>& candidates,
    size_t k, const Embedder& embedder);

struct DistractorModel {
  const NextTokenScorer& scorer;
  const Vocab& vocab;
};

// Samples 4k answers from the question text alone, then deduplicates them.
McQuestion build_mcq(const std::string& question, const std::string& key,
                     const DistractorModel& model, int k,
                     const DecodeConfig& config, uint64_t seed,
                     const Embedder& embedder);

}  // namespace quizsmith

#endif  // QUIZSMITH_DISTRACTORS_H_
