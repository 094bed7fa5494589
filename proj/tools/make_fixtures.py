#!/usr/bin/env python3
# Copyright 2026 The Quizsmith Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the deterministic fixtures under fixtures/."""

import json
import pathlib
import random

TEAMS = ["tigers", "falcons", "rovers", "comets", "pilots", "giants",
         "wolves", "sharks", "rangers", "owls"]
EVENTS = ["cup", "derby", "trophy", "shield", "classic", "open"]
CITIES = ["madrid", "lagos", "oslo", "lima", "osaka", "perth", "quito",
          "dakar"]
DAYS = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
        "sunday"]


def record(rng, index, broken):
    team, rival = rng.sample(TEAMS, 2)
    event, city, day = rng.choice(EVENTS), rng.choice(CITIES), rng.choice(DAYS)
    summary = (f"The {team.title()} beat the {rival.title()} to win the "
               f"{event} in {city.title()} on {day.title()}.")
    refs = [
        {"question": f"Who won the {event}?", "answer": team.title()},
        {"question": f"Where was the {event} played?", "answer": city.title()},
        {"question": f"When was the {event} final?", "answer": day.title()},
        {"question": f"Which team lost the {event} final?",
         "answer": rival.title()},
        {"question": "Who won?", "answer": team.upper()},
    ]
    if broken:
        refs[1]["question"] = (f"Where, according to the passage, was the "
                               f"{event} played?")
    return {"id": f"r{index:03d}", "summary": summary,
            "style": "NewsQuizQA", "references": refs}


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    out.mkdir(exist_ok=True)
    rng = random.Random(20261019)
    broken = set(rng.sample(range(55), 5))
    with open(out / "corpus.jsonl", "w") as f:
        for i in range(55):
            f.write(json.dumps(record(rng, i, i in broken)) + "\n")

    with open(out / "rating_questions.jsonl", "w") as f:
        f.write(json.dumps({"question_id": "q1", "key_option": "K",
                            "distractor_options": ["D1", "D2", "D3"]}) + "\n")
    ratings = [("r1", ["D1"], ["D1"]), ("r2", ["D1"], ["D1", "D2"]),
               ("r3", ["D1"], ["D1", "D2"]), ("r4", ["K"], []),
               ("r5", ["K", "D2"], [])]
    with open(out / "ratings.jsonl", "w") as f:
        for rater, marked, flags in ratings:
            f.write(json.dumps({"rater_id": rater, "question_id": "q1",
                                "marked": marked,
                                "overlap_flags": flags}) + "\n")

    with open(out / "survey.jsonl", "w") as f:
        for item, response in [("clarity", 1), ("clarity", 5),
                               ("difficulty", 3), ("difficulty", 3)]:
            f.write(json.dumps({"item": item, "response": response}) + "\n")


if __name__ == "__main__":
    main()
