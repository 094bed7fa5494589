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

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "table_scorer.h"

namespace quizsmith {
namespace {

// Maps each option to a fixed vector for hand-checkable geometry.
class FixedEmbedder : public Embedder {
 public:
  explicit FixedEmbedder(std::map<std::string, std::vector<double>> table)
      : table_(std::move(table)) {}
  std::vector<double> embed(std::string_view text) const override {
    auto v = table_.at(NormalizeOption(text));
    double n = 0;
    for (double x : v) n += x * x;
    for (double& x : v) x /= std::sqrt(n);
    return v;
  }

 private:
  std::map<std::string, std::vector<double>> table_;
};

TEST_CASE("1-D max-min example") {
  const std::vector<double> positions = {0, 1, 2, 10, 11};
  const auto picks = greedy_max_min(4, 2, [&](size_t a, size_t b) {
    return std::abs(positions[a] - positions[b]);
  });
  REQUIRE(picks.size() == 2);
  CHECK(positions[picks[0] + 1] == 11);
  CHECK(positions[picks[1] + 1] == 2);
}

TEST_CASE("ties go to the lowest candidate index") {
  const auto picks = greedy_max_min(3, 3, [](size_t, size_t) { return 1.0; });
  CHECK(picks == std::vector<size_t>{0, 1, 2});
}

TEST_CASE("greedy trace equals the brute-force oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> sizes(1, 12), dims(1, 4);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = static_cast<size_t>(sizes(rng));
    std::uniform_int_distribution<size_t> ks(1, n);
    const size_t k = ks(rng);
    const int d = dims(rng);
    // Half the trials use a coarse grid so exact distance ties occur.
    const bool coarse = trial % 2 == 0;
    std::vector<std::vector<double>> points(n + 1, std::vector<double>(d));
    for (auto& p : points) {
      for (auto& x : p) x = coarse ? grid(rng) : coord(rng);
    }
    const auto dist = [&](size_t a, size_t b) {
      double s = 0;
      for (int i = 0; i < d; ++i) s += std::abs(points[a][i] - points[b][i]);
      return s;
    };
    const auto picks = greedy_max_min(n, k, dist);
    CHECK(picks == oracle::NaiveGreedyMaxMin(n, k, dist));
    // No unselected candidate had a strictly larger min-distance at any step.
    std::vector<size_t> chosen = {0};
    for (size_t step = 0; step < picks.size(); ++step) {
      auto min_to = [&](size_t c) {
        double m = INFINITY;
        for (size_t p : chosen) m = std::min(m, dist(p, c + 1));
        return m;
      };
      const double picked = min_to(picks[step]);
      for (size_t c = 0; c < n; ++c) {
        if (std::find(picks.begin(), picks.begin() + step, c) !=
            picks.begin() + step) {
          continue;
        }
        CHECK(min_to(c) <= picked);
      }
      chosen.push_back(picks[step] + 1);
    }
  }
}

TEST_CASE("prefilter drops key copies, duplicates and empties") {
  const std::vector<std::string> candidates = {
      "Paris", " paris ", "Lyon", "", "LYON", "Nice", "  "};
  CHECK(prefilter_candidates(" paris", candidates) ==
        std::vector<size_t>{2, 5});
  CHECK(prefilter_candidates("Rome", candidates) ==
        std::vector<size_t>{0, 2, 5});
}

TEST_CASE("select_distractors uses embeddings and raises on shortage") {
  const FixedEmbedder embedder({{"key", {1, 0}},
                                {"near", {1, 0.1}},
                                {"far", {-1, 0}},
                                {"side", {0, 1}}});
  const std::vector<std::string> candidates = {"near", "Key", "side", "far",
                                               "FAR"};
  CHECK(select_distractors("key", candidates, 1, embedder) ==
        std::vector<std::string>{"far"});
  CHECK(select_distractors("key", candidates, 3, embedder) ==
        std::vector<std::string>{"far", "side", "near"});
  try {
    select_distractors("key", candidates, 4, embedder);
    FAIL("expected InsufficientCandidatesError");
  } catch (const InsufficientCandidatesError& e) {
    CHECK(e.survivors() == 3);
  }
}

TEST_CASE("trigram embedder") {
  const TrigramEmbedder embedder(64);
  const auto a = embedder.embed("Berlin");
  double norm = 0;
  for (double x : a) norm += x * x;
  CHECK(norm == doctest::Approx(1.0));
  CHECK(embedder.embed("BERLIN") == a);
  CHECK(cosine_distance(a, a) == doctest::Approx(0.0));
  CHECK(cosine_distance(a, embedder.embed("Berlim")) <
        cosine_distance(a, embedder.embed("Tokyo")));
  // Padded empty text "^$" has no trigram.
  for (double x : embedder.embed("")) CHECK(x == 0.0);
  CHECK(embedder.bucket("abc") < 64);
  CHECK_THROWS_AS(TrigramEmbedder(0), std::invalid_argument);
}

TEST_CASE("command embedder parses the JSON vector") {
  const CommandEmbedder embedder("printf '[3, 4]'; cat > /dev/null");
  const auto v = embedder.embed("anything");
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  const CommandEmbedder broken("echo nope");
  CHECK_THROWS_AS(broken.embed("x"), DataError);
}

TEST_CASE("build_mcq oversamples four times and picks k distractors") {
  const Vocab vocab({"red", "blue", "green", "gold", "what", "color"});
  ModelParams params = ModelParams::Zero(vocab.size());
  const ToyModelScorer scorer(params, vocab);
  DecodeConfig config;
  config.max_len = 2;
  const TrigramEmbedder embedder;
  const auto mcq = build_mcq("what color ?", "red", {scorer, vocab}, 3, config,
                             9, embedder);
  CHECK(mcq.key == "red");
  REQUIRE(mcq.distractors.size() == 3);
  std::set<std::string> seen;
  for (const auto& d : mcq.distractors) {
    CHECK(NormalizeOption(d) != "red");
    CHECK(seen.insert(NormalizeOption(d)).second);
  }
  // Same seed, same result.
  CHECK(build_mcq("what color ?", "red", {scorer, vocab}, 3, config, 9, embedder)
            .distractors == mcq.distractors);
}

}  // namespace
}  // namespace quizsmith
