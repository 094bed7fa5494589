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

#include "quizsmith/distractors.h"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "json.hpp"
#include "quizsmith/text_metrics.h"

namespace quizsmith {
namespace {

void Normalize(std::vector<double>& v) {
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (double& x : v) x /= norm;
}

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
uint64_t Fnv1a(std::string_view bytes) {
  uint64_t hash = 14695981039346656037ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string ShellQuote(const std::string& text) {
  std::string quoted = "'";
  for (const char c : text) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted.push_back(c);
    }
  }
  return quoted + "'";
}

}  // namespace

TrigramEmbedder::TrigramEmbedder(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("TrigramEmbedder: dim must be >= 1");
}

size_t TrigramEmbedder::bucket(std::string_view trigram) const {
  return static_cast<size_t>(Fnv1a(trigram) % static_cast<uint64_t>(dim_));
}

std::vector<double> TrigramEmbedder::embed(std::string_view text) const {
  std::string padded = "^";
  for (const char c : text) {
    padded.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  padded.push_back('$');
  std::vector<double> counts(static_cast<size_t>(dim_), 0.0);
  if (padded.size() < 3) return counts;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    counts[bucket(std::string_view(padded).substr(i, 3))] += 1.0;
  }
  Normalize(counts);
  return counts;
}

CommandEmbedder::CommandEmbedder(std::string command)
    : command_(std::move(command)) {}

std::vector<double> CommandEmbedder::embed(std::string_view text) const {
  namespace fs = std::filesystem;
  const fs::path input = fs::temp_directory_path() /
                         ("quizsmith-embed-" + std::to_string(::getpid()) +
                          "-" + std::to_string(Fnv1a(text)));
  {
    std::ofstream out(input, std::ios::binary);
    out << text;
  }
  const std::string command = command_ + " < " + ShellQuote(input.string());
  std::string output;
  {
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(command.c_str(), "r"),
                                               ::pclose);
    if (!pipe) throw DataError("cannot run embedder command: " + command_);
    char buffer[4096];
    while (const size_t n = std::fread(buffer, 1, sizeof(buffer), pipe.get())) {
      output.append(buffer, n);
    }
  }
  std::error_code ignored;
  fs::remove(input, ignored);
  try {
    auto vector = nlohmann::json::parse(output).get<std::vector<double>>();
    Normalize(vector);
    return vector;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("embedder command produced no JSON vector: " +
                    std::string(e.what()));
  }
}

double cosine_distance(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_distance: dimension mismatch");
  }
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return 1.0 - dot;
}

InsufficientCandidatesError::InsufficientCandidatesError(size_t survivors,
                                                         size_t wanted)
    : DataError("only " + std::to_string(survivors) +
                " distinct distractor candidates survive, " +
                std::to_string(wanted) + " needed"),
      survivors_(survivors) {}

std::string NormalizeOption(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<size_t> prefilter_candidates(
    std::string_view key, const std::vector<std::string>& candidates) {
  std::vector<std::string> seen = {NormalizeOption(key)};
  std::vector<size_t> survivors;
  for (size_t i = 0; i < candidates.size(); ++i) {
    std::string normalized = NormalizeOption(candidates[i]);
    if (normalized.empty() ||
        std::find(seen.begin(), seen.end(), normalized) != seen.end()) {
      continue;
    }
    seen.push_back(std::move(normalized));
    survivors.push_back(i);
  }
  return survivors;
}

std::vector<size_t> greedy_max_min(
    size_t candidates, size_t k,
    const std::function<double(size_t, size_t)>& distance) {
  if (k > candidates) throw InsufficientCandidatesError(candidates, k);
  // min_distance[c]: distance from point c + 1 to the nearest chosen point.
  std::vector<double> min_distance(candidates);
  for (size_t c = 0; c < candidates; ++c) min_distance[c] = distance(0, c + 1);
  std::vector<bool> chosen(candidates, false);
  std::vector<size_t> selected;
  while (selected.size() < k) {
    size_t best = candidates;
    for (size_t c = 0; c < candidates; ++c) {
      if (!chosen[c] && (best == candidates || min_distance[c] > min_distance[best])) {
        best = c;
      }
    }
    chosen[best] = true;
    selected.push_back(best);
    for (size_t c = 0; c < candidates; ++c) {
      if (!chosen[c]) {
        min_distance[c] = std::min(min_distance[c], distance(best + 1, c + 1));
      }
    }
  }
  return selected;
}

std::vector<std::string> select_distractors(
    std::string_view key, const std::vector<std::string>& candidates, size_t k,
    const Embedder& embedder) {
  const auto survivors = prefilter_candidates(key, candidates);
  if (survivors.size() < k) {
    throw InsufficientCandidatesError(survivors.size(), k);
  }
  std::vector<std::vector<double>> points = {embedder.embed(key)};
  for (const size_t i : survivors) points.push_back(embedder.embed(candidates[i]));
  const auto picks =
      greedy_max_min(survivors.size(), k, [&](size_t a, size_t b) {
        return cosine_distance(points[a], points[b]);
      });
  std::vector<std::string> distractors;
  for (const size_t p : picks) distractors.push_back(candidates[survivors[p]]);
  return distractors;
}

McQuestion build_mcq(const std::string& question, const std::string& key,
                     const DistractorModel& model, int k,
                     const DecodeConfig& config, uint64_t seed,
                     const Embedder& embedder) {
  if (k < 1) throw std::invalid_argument("build_mcq: k must be >= 1");
  const TokenIds input = model.vocab.encode_known(tokenize(question));
  std::vector<std::string> candidates;
  for (const auto& ids : sample_candidates(model.scorer, input, k, config, seed)) {
    candidates.push_back(model.vocab.decode(ids));
  }
  return {question, key,
          select_distractors(key, candidates, static_cast<size_t>(k), embedder)};
}

}  // namespace quizsmith
