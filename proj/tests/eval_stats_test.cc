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

#include "quizsmith/eval_stats.h"

#include <cmath>
#include <random>

#include "doctest.h"
#include "quizsmith/error.h"
#include "stats_fixtures.h"

namespace quizsmith {
namespace {

TEST_CASE("five-rater hand fixture") {
  const auto report = compute_stats(testing::HandRatings(), testing::HandQuestions());
  CHECK(report.ratings == 5);
  CHECK(report.plausible_per_question == doctest::Approx(1.2));
  CHECK(report.single_plausible_pct == doctest::Approx(80.0));
  CHECK(report.single_plausible_is_distractor_pct == doctest::Approx(75.0));
  CHECK(report.keys_not_plausible_pct == doctest::Approx(60.0));
  CHECK(report.distractors_plausible_pct == doctest::Approx(400.0 / 15.0));
  CHECK(report.at_least_one_distractor_plausible_pct == doctest::Approx(80.0));
  // D1 flagged by 3 of 5 counts, D2 by 2 of 5 does not: 1 of 4 options.
  CHECK(report.duplicate_overlapping_pct == doctest::Approx(25.0));
}

TEST_CASE("all-key fixture") {
  const std::vector<QuestionOptions> questions = {{"a", "k", {"x", "y"}},
                                                  {"b", "k", {"z"}}};
  std::vector<RatingRecord> ratings;
  for (const auto* rater : {"r1", "r2", "r3"}) {
    ratings.push_back({rater, "a", {"k"}, {}});
    ratings.push_back({rater, "b", {"k"}, {}});
  }
  const auto report = compute_stats(ratings, questions);
  CHECK(report.plausible_per_question == 1.0);
  CHECK(report.single_plausible_pct == 100.0);
  CHECK(report.single_plausible_is_distractor_pct == 0.0);
  CHECK(report.keys_not_plausible_pct == 0.0);
  CHECK(report.distractors_plausible_pct == 0.0);
  CHECK(report.at_least_one_distractor_plausible_pct == 0.0);
  CHECK(report.duplicate_overlapping_pct == 0.0);
}

TEST_CASE("at-least-one dominates the other fooling metrics") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto data = testing::RandomDataset(rng);
    const auto r = compute_stats(data.ratings, data.questions);
    for (double pct : {r.single_plausible_pct, r.single_plausible_is_distractor_pct,
                       r.keys_not_plausible_pct, r.distractors_plausible_pct,
                       r.at_least_one_distractor_plausible_pct,
                       r.duplicate_overlapping_pct}) {
      CHECK(pct >= 0.0);
      CHECK(pct <= 100.0);
    }
    CHECK(r.at_least_one_distractor_plausible_pct >=
          r.single_plausible_is_distractor_pct - 1e-9);
    CHECK(r.at_least_one_distractor_plausible_pct >= r.keys_not_plausible_pct - 1e-9);
    CHECK(r.at_least_one_distractor_plausible_pct >=
          r.distractors_plausible_pct - 1e-9);
  }
}

TEST_CASE("pooled distractor share can exceed at-least-one across uneven questions") {
  const std::vector<QuestionOptions> questions = {{"a", "k", {"1", "2", "3", "4"}},
                                                  {"b", "k", {"1"}}};
  const std::vector<RatingRecord> ratings = {{"r", "a", {"1", "2", "3", "4"}, {}},
                                             {"r", "b", {"k"}, {}}};
  const auto r = compute_stats(ratings, questions);
  CHECK(r.distractors_plausible_pct == doctest::Approx(80.0));
  CHECK(r.at_least_one_distractor_plausible_pct == doctest::Approx(50.0));
}

TEST_CASE("invalid ratings are rejected") {
  const auto questions = testing::HandQuestions();
  const std::vector<RatingRecord> unknown_question = {{"r", "q9", {"K"}, {}}};
  CHECK_THROWS_AS(compute_stats(unknown_question, questions), DataError);
  const std::vector<RatingRecord> unknown_option = {{"r", "q1", {"D7"}, {}}};
  CHECK_THROWS_AS(compute_stats(unknown_option, questions), DataError);
  const std::vector<RatingRecord> unknown_flag = {{"r", "q1", {"K"}, {"Z"}}};
  CHECK_THROWS_AS(compute_stats(unknown_flag, questions), DataError);
  const std::vector<RatingRecord> empty = {{"r", "q1", {}, {}}};
  CHECK_THROWS_AS(compute_stats(empty, questions), DataError);
  const std::vector<RatingRecord> twice = {{"r", "q1", {"K"}, {}},
                                           {"r", "q1", {"D1"}, {}}};
  CHECK_THROWS_AS(compute_stats(twice, questions), DataError);
  const std::vector<QuestionOptions> key_in_distractors = {{"q1", "K", {"K", "D1"}}};
  const std::vector<RatingRecord> one = {{"r", "q1", {"K"}, {}}};
  CHECK_THROWS_AS(compute_stats(one, key_in_distractors), DataError);
}

TEST_CASE("survey aggregation") {
  const std::vector<int> threes(10, 3);
  auto agg = aggregate_ratings(threes);
  CHECK(agg.mean == 3.0);
  CHECK(agg.margin == 0.0);

  const std::vector<int> spread = {1, 5};
  agg = aggregate_ratings(spread);
  CHECK(agg.mean == 3.0);
  CHECK(agg.margin == doctest::Approx(1.96 * 2.0 * std::sqrt(2.0) / std::sqrt(2.0)));
  CHECK(agg.margin == doctest::Approx(3.92));

  const std::vector<int> single = {4};
  agg = aggregate_ratings(single);
  CHECK(agg.margin == 0.0);
  CHECK(agg.count == 1);

  const std::vector<int> bad = {3, 6};
  CHECK_THROWS_AS(aggregate_ratings(bad), DataError);
  CHECK_THROWS_AS(aggregate_ratings(std::vector<int>{}), DataError);
}

TEST_CASE("survey margin sanity at the reported scale") {
  // 1000 responses: 820 threes and 180 fours give mean 3.18, sd about 0.385.
  std::vector<int> responses(820, 3);
  responses.insert(responses.end(), 180, 4);
  const auto agg = aggregate_ratings(responses);
  CHECK(agg.mean == doctest::Approx(3.18));
  CHECK(agg.margin > 0.02);
  CHECK(agg.margin < 0.04);
}

TEST_CASE("JSON readers") {
  const auto rating = RatingFromJson(nlohmann::json::parse(
      R"({"rater_id":"a","question_id":"q","marked":["K","D1"]})"));
  CHECK(rating.marked.size() == 2);
  CHECK(rating.overlap_flags.empty());
  CHECK_THROWS_AS(RatingFromJson(nlohmann::json::parse(R"({"rater_id":"a"})")),
                  DataError);
  const auto options = QuestionOptionsFromJson(nlohmann::json::parse(
      R"({"question_id":"q","key_option":"K","distractor_options":["D1"]})"));
  CHECK(options.key_option == "K");
  const auto json = StatsToJson(compute_stats(testing::HandRatings(),
                                              testing::HandQuestions()));
  CHECK(json.at("single_plausible_pct").get<double>() == doctest::Approx(80.0));
}

}  // namespace
}  // namespace quizsmith
