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
#include <map>
#include <utility>

#include "quizsmith/error.h"

namespace quizsmith {
namespace {

constexpr double kZ95 = 1.96;

double Pct(size_t part, size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / whole;
}

}  // namespace

StatsReport compute_stats(std::span<const RatingRecord> ratings,
                          std::span<const QuestionOptions> questions) {
  std::map<std::string, const QuestionOptions*> by_id;
  for (const auto& q : questions) {
    if (q.distractor_options.empty() || q.distractor_options.count(q.key_option)) {
      throw DataError("question \"" + q.question_id +
                      "\" needs a key outside a non-empty distractor set");
    }
    if (!by_id.emplace(q.question_id, &q).second) {
      throw DataError("duplicate question id \"" + q.question_id + "\"");
    }
  }

  std::set<std::pair<std::string, std::string>> seen;
  // Per question: number of ratings and flag votes per option.
  std::map<std::string, std::pair<size_t, std::map<std::string, size_t>>> votes;
  size_t marked_total = 0, single = 0, single_distractor = 0, key_missed = 0;
  size_t distractor_pairs = 0, distractor_marked = 0, any_distractor = 0;

  for (const auto& r : ratings) {
    const auto it = by_id.find(r.question_id);
    if (it == by_id.end()) {
      throw DataError("rating references unknown question \"" +
                      r.question_id + "\"");
    }
    const QuestionOptions& q = *it->second;
    if (!seen.emplace(r.rater_id, r.question_id).second) {
      throw DataError("rater \"" + r.rater_id + "\" rated question \"" +
                      r.question_id + "\" twice");
    }
    if (r.marked.empty()) {
      throw DataError("rating by \"" + r.rater_id + "\" marks no option");
    }
    const auto known = [&](const std::string& option) {
      return option == q.key_option || q.distractor_options.count(option) > 0;
    };
    for (const auto* options : {&r.marked, &r.overlap_flags}) {
      for (const auto& option : *options) {
        if (!known(option)) {
          throw DataError("rating references unknown option \"" + option +
                          "\" of question \"" + q.question_id + "\"");
        }
      }
    }

    marked_total += r.marked.size();
    if (r.marked.size() == 1) {
      ++single;
      if (q.distractor_options.count(*r.marked.begin())) ++single_distractor;
    }
    if (!r.marked.count(q.key_option)) ++key_missed;
    size_t hits = 0;
    for (const auto& d : q.distractor_options) hits += r.marked.count(d);
    distractor_pairs += q.distractor_options.size();
    distractor_marked += hits;
    if (hits > 0) ++any_distractor;

    auto& [panel, flags] = votes[q.question_id];
    ++panel;
    for (const auto& option : r.overlap_flags) ++flags[option];
  }

  size_t options_total = 0, options_flagged = 0;
  for (const auto& q : questions) {
    options_total += 1 + q.distractor_options.size();
    const auto v = votes.find(q.question_id);
    if (v == votes.end()) continue;
    const auto& [panel, flags] = v->second;
    for (const auto& [option, count] : flags) {
      if (2 * count > panel) ++options_flagged;
    }
  }

  StatsReport report;
  report.ratings = ratings.size();
  report.plausible_per_question =
      ratings.empty() ? 0.0
                      : static_cast<double>(marked_total) / ratings.size();
  report.single_plausible_pct = Pct(single, ratings.size());
  report.single_plausible_is_distractor_pct = Pct(single_distractor, single);
  report.keys_not_plausible_pct = Pct(key_missed, ratings.size());
  report.distractors_plausible_pct = Pct(distractor_marked, distractor_pairs);
  report.at_least_one_distractor_plausible_pct =
      Pct(any_distractor, ratings.size());
  report.duplicate_overlapping_pct = Pct(options_flagged, options_total);
  return report;
}

RatingAggregate aggregate_ratings(std::span<const int> responses) {
  if (responses.empty()) throw DataError("no survey responses");
  double sum = 0.0;
  for (const int r : responses) {
    if (r < 1 || r > 5) {
      throw DataError("survey response " + std::to_string(r) +
                      " outside 1..5");
    }
    sum += r;
  }
  const double n = static_cast<double>(responses.size());
  RatingAggregate aggregate{sum / n, 0.0, responses.size()};
  if (responses.size() > 1) {
    double squares = 0.0;
    for (const int r : responses) {
      squares += (r - aggregate.mean) * (r - aggregate.mean);
    }
    aggregate.margin = kZ95 * std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
  }
  return aggregate;
}

nlohmann::json StatsToJson(const StatsReport& report) {
  return {
      {"ratings", report.ratings},
      {"plausible_per_question", report.plausible_per_question},
      {"single_plausible_pct", report.single_plausible_pct},
      {"single_plausible_is_distractor_pct",
       report.single_plausible_is_distractor_pct},
      {"keys_not_plausible_pct", report.keys_not_plausible_pct},
      {"distractors_plausible_pct", report.distractors_plausible_pct},
      {"at_least_one_distractor_plausible_pct",
       report.at_least_one_distractor_plausible_pct},
      {"duplicate_overlapping_pct", report.duplicate_overlapping_pct},
  };
}

RatingRecord RatingFromJson(const nlohmann::json& json) {
  try {
    RatingRecord r;
    r.rater_id = json.at("rater_id").get<std::string>();
    r.question_id = json.at("question_id").get<std::string>();
    r.marked = json.at("marked").get<std::set<std::string>>();
    r.overlap_flags = json.value("overlap_flags", std::set<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rating: ") + e.what());
  }
}

QuestionOptions QuestionOptionsFromJson(const nlohmann::json& json) {
  try {
    return {json.at("question_id").get<std::string>(),
            json.at("key_option").get<std::string>(),
            json.at("distractor_options").get<std::set<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed question options: ") + e.what());
  }
}

}  // namespace quizsmith
