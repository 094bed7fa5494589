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

#include "quizsmith/decoding.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace quizsmith {
namespace {

constexpr double kLogProbTolerance = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> CheckedLogProbs(const NextTokenScorer& scorer,
                                    std::span<const TokenId> input,
                                    std::span<const TokenId> prefix) {
  std::vector<double> log_probs = scorer.next_log_probs(input, prefix);
  if (log_probs.size() != static_cast<size_t>(scorer.vocab_size())) {
    throw ScorerError("scorer returned " + std::to_string(log_probs.size()) +
                      " log-probabilities for a vocabulary of " +
                      std::to_string(scorer.vocab_size()));
  }
  double max = kNegInf;
  for (const double lp : log_probs) {
    if (std::isnan(lp) || lp > 0.0 + kLogProbTolerance) {
      throw ScorerError("scorer returned an invalid log-probability");
    }
    max = std::max(max, lp);
  }
  double sum = 0.0;
  for (const double lp : log_probs) sum += std::exp(lp - max);
  const double log_sum = max + std::log(sum);
  if (!(std::abs(log_sum) <= kLogProbTolerance)) {
    throw ScorerError("scorer log-probabilities do not normalize (logsumexp = " +
                      std::to_string(log_sum) + ")");
  }
  return log_probs;
}

// Higher score first, then the lexicographically smallest sequence.
bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

bool HigherLogProb(const Hypothesis& a, const Hypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.tokens < b.tokens;
}

TokenId Argmax(const std::vector<double>& log_probs) {
  return static_cast<TokenId>(
      std::max_element(log_probs.begin(), log_probs.end()) - log_probs.begin());
}

}  // namespace

ToyModelScorer::ToyModelScorer(const ModelParams& params, const Vocab& vocab)
    : params_(params), bos_(vocab.bos()), eos_(vocab.eos()), pad_(vocab.pad()) {
  if (params.vocab_size() != vocab.size()) {
    throw std::invalid_argument("ToyModelScorer: params/vocab size mismatch");
  }
}

std::vector<double> ToyModelScorer::next_log_probs(
    std::span<const TokenId> input, std::span<const TokenId> prefix) const {
  Eigen::VectorXd logits =
      forward_logits(params_, input, prefix.empty() ? bos_ : prefix.back());
  logits(bos_) = kNegInf;
  logits(pad_) = kNegInf;
  const Eigen::VectorXd log_probs = log_softmax(logits);
  return {log_probs.data(), log_probs.data() + log_probs.size()};
}

void DecodeConfig::Validate() const {
  if (beams < 1) throw std::invalid_argument("beams must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("temperature must be > 0");
  }
}

double normalized_score(double log_prob, size_t length, double alpha) {
  return log_prob / std::pow(static_cast<double>(length), alpha);
}

Hypothesis beam_search(const NextTokenScorer& scorer,
                       std::span<const TokenId> input,
                       const DecodeConfig& config) {
  config.Validate();
  const auto beams = static_cast<size_t>(config.beams);
  std::vector<Hypothesis> open = {Hypothesis{}};
  std::vector<Hypothesis> complete;
  for (int length = 1; length <= config.max_len && !open.empty(); ++length) {
    // Every extension competes for the `beams` slots; extensions that end
    // here leave the beam and join the completed pool.
    std::vector<Hypothesis> expanded;
    for (const auto& hyp : open) {
      const auto log_probs = CheckedLogProbs(scorer, input, hyp.tokens);
      for (TokenId token = 0; token < scorer.vocab_size(); ++token) {
        if (log_probs[token] == kNegInf) continue;
        Hypothesis next{hyp.tokens, hyp.log_prob + log_probs[token], 0.0};
        next.tokens.push_back(token);
        next.score = normalized_score(next.log_prob, next.tokens.size(),
                                      config.alpha);
        expanded.push_back(std::move(next));
      }
    }
    const size_t keep = std::min(beams, expanded.size());
    std::partial_sort(expanded.begin(), expanded.begin() + keep, expanded.end(),
                      HigherLogProb);
    expanded.resize(keep);
    open.clear();
    for (auto& hyp : expanded) {
      if (hyp.tokens.back() == scorer.eos() || length == config.max_len) {
        complete.push_back(std::move(hyp));
      } else {
        open.push_back(std::move(hyp));
      }
    }

    if (!complete.empty() && !open.empty()) {
      const auto best = std::min_element(complete.begin(), complete.end(), Better);
      // Log-probabilities only fall as a hypothesis grows, so an open
      // hypothesis can at best reach log_prob / max_len^alpha.
      const double bound = normalized_score(
          open.front().log_prob, static_cast<size_t>(config.max_len),
          config.alpha);
      if (bound < best->score) break;
    }
  }
  if (complete.empty()) {
    throw ScorerError("beam search produced no complete hypothesis");
  }
  return *std::min_element(complete.begin(), complete.end(), Better);
}

Hypothesis greedy_decode(const NextTokenScorer& scorer,
                         std::span<const TokenId> input, int max_len) {
  Hypothesis hyp;
  while (static_cast<int>(hyp.tokens.size()) < max_len) {
    const auto log_probs = CheckedLogProbs(scorer, input, hyp.tokens);
    const TokenId token = Argmax(log_probs);
    hyp.tokens.push_back(token);
    hyp.log_prob += log_probs[token];
    if (token == scorer.eos()) break;
  }
  hyp.score = normalized_score(hyp.log_prob, hyp.tokens.size(), 0.0);
  return hyp;
}

TokenIds sample(const NextTokenScorer& scorer, std::span<const TokenId> input,
                const DecodeConfig& config, uint64_t seed) {
  config.Validate();
  if (config.temperature < kGreedyTemperature) {
    return greedy_decode(scorer, input, config.max_len).tokens;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  TokenIds tokens;
  std::vector<double> weights(static_cast<size_t>(scorer.vocab_size()));
  while (static_cast<int>(tokens.size()) < config.max_len) {
    const auto log_probs = CheckedLogProbs(scorer, input, tokens);
    const double max = *std::max_element(log_probs.begin(), log_probs.end());
    double total = 0.0;
    for (size_t t = 0; t < weights.size(); ++t) {
      weights[t] = log_probs[t] == kNegInf
                       ? 0.0
                       : std::exp((log_probs[t] - max) / config.temperature);
      total += weights[t];
    }
    const double u = uniform(rng) * total;
    TokenId token = Argmax(log_probs);
    double cumulative = 0.0;
    for (size_t t = 0; t < weights.size(); ++t) {
      if (weights[t] == 0.0) continue;
      cumulative += weights[t];
      if (u < cumulative) {
        token = static_cast<TokenId>(t);
        break;
      }
    }
    tokens.push_back(token);
    if (token == scorer.eos()) break;
  }
  return tokens;
}

std::vector<TokenIds> sample_candidates(const NextTokenScorer& scorer,
                                        std::span<const TokenId> input, int k,
                                        const DecodeConfig& config,
                                        uint64_t seed) {
  if (k < 1) throw std::invalid_argument("sample_candidates: k must be >= 1");
  std::vector<TokenIds> candidates;
  const int count = kCandidatesPerDistractor * k;
  candidates.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    candidates.push_back(
        sample(scorer, input, config, seed + static_cast<uint64_t>(i)));
  }
  return candidates;
}

}  // namespace quizsmith
