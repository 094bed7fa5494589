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

#ifndef QUIZSMITH_DECODING_H_
#define QUIZSMITH_DECODING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "quizsmith/toy_model.h"

namespace quizsmith {

// Next-token distribution over a fixed vocabulary. Implementations must be
// safe to call concurrently.
class NextTokenScorer {
 public:
  virtual ~NextTokenScorer() = default;
  virtual int vocab_size() const = 0;
  virtual TokenId eos() const = 0;
  // Log-probabilities for the token following `prefix` (which excludes any
  // begin marker). logsumexp must be 0.
  virtual std::vector<double> next_log_probs(
      std::span<const TokenId> input, std::span<const TokenId> prefix) const = 0;
};

// Decodes a trained toy model. <bos> and <pad> are never emitted.
class ToyModelScorer : public NextTokenScorer {
 public:
  ToyModelScorer(const ModelParams& params, const Vocab& vocab);
  int vocab_size() const override { return params_.vocab_size(); }
  TokenId eos() const override { return eos_; }
  std::vector<double> next_log_probs(
      std::span<const TokenId> input,
      std::span<const TokenId> prefix) const override;

 private:
  const ModelParams& params_;
  TokenId bos_;
  TokenId eos_;
  TokenId pad_;
};

inline constexpr int kQaMaxLen = 128;
inline constexpr int kDistractorMaxLen = 64;
inline constexpr int kCandidatesPerDistractor = 4;

struct DecodeConfig {
  int beams = 8;
  double alpha = 0.9;
  int max_len = kQaMaxLen;
  double temperature = 1.0;

  // Throws std::invalid_argument.
  void Validate() const;
};

// Temperatures below this decode greedily.
inline constexpr double kGreedyTemperature = 1e-6;

// sum(log p) / |y|^alpha.
double normalized_score(double log_prob, size_t length, double alpha);

struct Hypothesis {
  TokenIds tokens;  // includes the final <eos> when complete
  double log_prob = 0.0;
  double score = 0.0;
};

// Throws ScorerError when the scorer returns an invalid distribution.
Hypothesis beam_search(const NextTokenScorer& scorer,
                       std::span<const TokenId> input,
                       const DecodeConfig& config);

Hypothesis greedy_decode(const NextTokenScorer& scorer,
                         std::span<const TokenId> input, int max_len);

TokenIds sample(const NextTokenScorer& scorer, std::span<const TokenId> input,
                const DecodeConfig& config, uint64_t seed);

// 4k independent samples drawn with seeds seed, seed + 1, ...
std::vector<TokenIds> sample_candidates(const NextTokenScorer& scorer,
                                        std::span<const TokenId> input, int k,
                                        const DecodeConfig& config,
                                        uint64_t seed);

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quizsmith

#endif  // QUIZSMITH_DECODING_H_
