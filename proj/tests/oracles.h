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

// Brute-force reference implementations used only by tests. They share no
// code with the library paths they check.
#ifndef QUIZSMITH_TESTS_ORACLES_H_
#define QUIZSMITH_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace quizsmith::oracle {

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf FromOverlap(double overlap, double cand, double ref) {
  Prf s;
  s.p = cand > 0 ? overlap / cand : 0;
  s.r = ref > 0 ? overlap / ref : 0;
  s.f = (s.p > 0 && s.r > 0) ? 2 * s.p * s.r / (s.p + s.r) : 0;
  return s;
}

// Enumerates every n-gram occurrence and matches each candidate occurrence
// to an unused equal reference occurrence.
inline Prf RougeN(const std::vector<std::string>& cand,
                  const std::vector<std::string>& ref, int n) {
  auto grams = [n](const std::vector<std::string>& s) {
    std::vector<std::vector<std::string>> out;
    for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
      out.emplace_back(s.begin() + i, s.begin() + i + n);
    }
    return out;
  };
  const auto c = grams(cand);
  const auto r = grams(ref);
  std::vector<bool> used(r.size(), false);
  int overlap = 0;
  for (const auto& g : c) {
    for (size_t j = 0; j < r.size(); ++j) {
      if (!used[j] && r[j] == g) {
        used[j] = true;
        ++overlap;
        break;
      }
    }
  }
  return FromOverlap(overlap, static_cast<double>(c.size()),
                     static_cast<double>(r.size()));
}

inline bool IsSubsequence(const std::vector<std::string>& sub,
                          const std::vector<std::string>& seq) {
  size_t j = 0;
  for (size_t i = 0; i < seq.size() && j < sub.size(); ++i) {
    if (seq[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

// Tries every subsequence of the candidate (2^|cand| of them).
inline int ExhaustiveLcs(const std::vector<std::string>& cand,
                         const std::vector<std::string>& ref) {
  int best = 0;
  const size_t n = cand.size();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::string> sub;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(cand[i]);
    }
    if (static_cast<int>(sub.size()) > best && IsSubsequence(sub, ref)) {
      best = static_cast<int>(sub.size());
    }
  }
  return best;
}

inline Prf RougeL(const std::vector<std::string>& cand,
                  const std::vector<std::string>& ref) {
  return FromOverlap(ExhaustiveLcs(cand, ref), static_cast<double>(cand.size()),
                     static_cast<double>(ref.size()));
}

inline std::vector<std::string> RandomTokens(std::mt19937_64& rng,
                                             int max_len, int vocab) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::vector<std::string> out(static_cast<size_t>(len(rng)));
  for (auto& t : out) t = "w" + std::to_string(word(rng));
  return out;
}

// Softmax cross-entropy written with explicit loops over raw arrays.
// Matrices are given as row-major V*V vectors: logits[r] = sum_c m[r*V+c]*x[c].
inline double SoftmaxCe(const std::vector<double>& logits, int target) {
  double max = -std::numeric_limits<double>::infinity();
  for (double l : logits) max = std::max(max, l);
  double z = 0;
  for (double l : logits) z += std::exp(l - max);
  return -(logits[target] - max - std::log(z));
}

// Exhaustive search over all complete sequences: those ending in eos with
// length <= max_len, and those of exactly max_len without eos.
struct Scored {
  std::vector<int> tokens;
  double score = -std::numeric_limits<double>::infinity();
};

inline Scored ExhaustiveDecode(
    int vocab, int eos, int max_len, double alpha,
    const std::function<std::vector<double>(const std::vector<int>&)>& lp) {
  Scored best;
  std::function<void(std::vector<int>&, double)> walk =
      [&](std::vector<int>& prefix, double log_prob) {
        const auto next = lp(prefix);
        for (int t = 0; t < vocab; ++t) {
          if (std::isinf(next[t])) continue;
          prefix.push_back(t);
          const double total = log_prob + next[t];
          const bool done = t == eos || static_cast<int>(prefix.size()) == max_len;
          if (done) {
            const double score =
                total / std::pow(static_cast<double>(prefix.size()), alpha);
            if (score > best.score ||
                (score == best.score && prefix < best.tokens)) {
              best = {prefix, score};
            }
          } else {
            walk(prefix, total);
          }
          prefix.pop_back();
        }
      };
  std::vector<int> empty;
  walk(empty, 0.0);
  return best;
}

// Greedy max-min re-derived from scratch each round: point 0 is the key,
// points 1..n are candidates.
inline std::vector<size_t> NaiveGreedyMaxMin(
    size_t n, size_t k, const std::function<double(size_t, size_t)>& dist) {
  std::vector<size_t> chosen_points = {0};
  std::vector<size_t> picks;
  for (size_t round = 0; round < k; ++round) {
    double best_value = -std::numeric_limits<double>::infinity();
    size_t best = n;
    for (size_t c = 0; c < n; ++c) {
      if (std::find(picks.begin(), picks.end(), c) != picks.end()) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (size_t p : chosen_points) nearest = std::min(nearest, dist(p, c + 1));
      if (nearest > best_value) {
        best_value = nearest;
        best = c;
      }
    }
    picks.push_back(best);
    chosen_points.push_back(best + 1);
  }
  return picks;
}

}  // namespace quizsmith::oracle

#endif  // QUIZSMITH_TESTS_ORACLES_H_
