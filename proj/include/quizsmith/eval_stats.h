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

#ifndef QUIZSMITH_EVAL_STATS_H_
#define QUIZSMITH_EVAL_STATS_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace quizsmith {

struct RatingRecord {
  std::string rater_id;
  std::string question_id;
  std::set<std::string> marked;         // options the rater thinks may be correct
  std::set<std::string> overlap_flags;  // options flagged duplicate/overlapping
};

struct QuestionOptions {
  std::string question_id;
  std::string key_option;
  std::set<std::string> distractor_options;
};

// Percentages are in [0, 100]; a statistic with an empty denominator is 0.
struct StatsReport {
  double plausible_per_question = 0.0;
  double single_plausible_pct = 0.0;
  double single_plausible_is_distractor_pct = 0.0;
  double keys_not_plausible_pct = 0.0;
  double distractors_plausible_pct = 0.0;
  double at_least_one_distractor_plausible_pct = 0.0;
  double duplicate_overlapping_pct = 0.0;
  size_t ratings = 0;
};

// Throws DataError on unknown questions or options, empty `marked` sets,
// repeated (rater, question) pairs and malformed question option sets.
StatsReport compute_stats(std::span<const RatingRecord> ratings,
                          std::span<const QuestionOptions> questions);

struct RatingAggregate {
  double mean = 0.0;
  double margin = 0.0;  // 1.96 * sample sd / sqrt(n); 0 when n == 1
  size_t count = 0;
};

// Responses on a 1..5 scale. Throws DataError when out of range or empty.
RatingAggregate aggregate_ratings(std::span<const int> responses);

nlohmann::json StatsToJson(const StatsReport& report);
RatingRecord RatingFromJson(const nlohmann::json& json);
QuestionOptions QuestionOptionsFromJson(const nlohmann::json& json);

}  // namespace quizsmith

#endif  // QUIZSMITH_EVAL_STATS_H_
