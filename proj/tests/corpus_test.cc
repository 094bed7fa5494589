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

#include "quizsmith/corpus.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "quizsmith/error.h"

namespace quizsmith {
namespace {

using V = PairViolation;

std::set<V> Violations(const QAPair& pair) {
  const auto list = validate_pair(pair);
  return {list.begin(), list.end()};
}

SummaryRecord Record(std::string id, std::vector<QAPair> refs,
                     StyleLabel style = StyleLabel::kNewsQuizQa) {
  return {std::move(id), "summary of " + id, std::move(refs), style};
}

QAPair Valid(const std::string& stem) {
  return {"Which team won the " + stem + "?", "The " + stem + " team"};
}

TEST_CASE("validate_pair rules") {
  CHECK(validate_pair({"Who won the 2020 election?", "Joe Biden"}).empty());
  CHECK(Violations({"Is the sky blue?", "Yes"}) == std::set{V::kYesNoQuestion});
  CHECK(Violations({"What did she say according to the passage?", "Hello."}) ==
        std::set{V::kBlocklistedPhrase, V::kAnswerEndPunctuation});
  CHECK(Violations({"Who won the race", "Ann"}) == std::set{V::kNoQuestionMark});
  CHECK(Violations({"What do I need to know?", "Nothing"}) ==
        std::set{V::kBlocklistedPhrase});
  CHECK(Violations({"  ", "x"}) == std::set{V::kEmptyField});
  CHECK(Violations({"Who?", ""}) == std::set{V::kEmptyField});
  CHECK(Violations({"DOES it rain?", "no"}) == std::set{V::kYesNoQuestion});
  // "is" only counts as the first token.
  CHECK(validate_pair({"What is the capital of France?", "Paris"}).empty());
}

TEST_CASE("validate_pair blocklist is extensible") {
  Blocklist blocklist;
  blocklist.phrases.push_back("in this article");
  const auto v = validate_pair({"Who is named in this article?", "Bob"}, blocklist);
  CHECK(v == std::vector{V::kBlocklistedPhrase});
}

TEST_CASE("postprocess_corpus") {
  SUBCASE("five valid references lose the shortest question") {
    const Corpus in = {Record("r1", {Valid("alpha"), Valid("b"),
                                     Valid("gamma"), Valid("delta"),
                                     Valid("epsilon")})};
    const Corpus out = postprocess_corpus(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].references.size() == 4);
    for (const auto& r : out[0].references) CHECK(r.question != Valid("b").question);
  }
  SUBCASE("two blocklisted of five leaves two, so the record is dropped") {
    const Corpus in = {Record(
        "r1", {Valid("alpha"), {"Did I win?", "no"},
               {"What is it according to the passage?", "x"}, Valid("gamma"),
               Valid("delta")})};
    CHECK(postprocess_corpus(in).empty());
  }
  SUBCASE("empty corpus") { CHECK(postprocess_corpus({}).empty()); }
  SUBCASE("shortest ties go to the lowest index") {
    const Corpus in = {Record("r1", {{"Who won X?", "A"}, {"Who won Y?", "B"},
                                     Valid("gamma"), Valid("delta"),
                                     Valid("epsilon")})};
    const Corpus out = postprocess_corpus(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].references[0].question == "Who won Y?");
  }
  SUBCASE("grammar hook runs before validation") {
    const Corpus in = {Record("r1", {{"who won a", "A"}, {"who won bb", "B"},
                                     {"who won ccc", "C"}, {"who won dddd", "D"},
                                     {"who won eeeee", "E"}})};
    CHECK(postprocess_corpus(in).empty());
    const auto add_mark = [](const std::string& q) { return q + "?"; };
    const Corpus out = postprocess_corpus(in, add_mark);
    REQUIRE(out.size() == 1);
    CHECK(out[0].references.front().question == "who won bb?");
  }
}

TEST_CASE("postprocess output invariants") {
  Corpus in;
  for (int i = 0; i < 30; ++i) {
    std::vector<QAPair> refs;
    for (int j = 0; j < 3 + i % 4; ++j) {
      refs.push_back(j % 5 == 4 ? QAPair{"Is it?", "yes"}
                                : Valid(std::string(j + 1, 'x')));
    }
    in.push_back(Record("r" + std::to_string(i), refs));
  }
  for (const auto& record : postprocess_corpus(in)) {
    CHECK(record.references.size() == 4);
    for (const auto& r : record.references) CHECK(validate_pair(r).empty());
  }
}

Corpus Numbered(size_t n) {
  Corpus c;
  for (size_t i = 0; i < n; ++i) {
    c.push_back(Record("id" + std::to_string(i), {Valid("x")}));
  }
  return c;
}

TEST_CASE("split_corpus proportions and determinism") {
  const auto ten = split_corpus(Numbered(10), 1);
  CHECK(ten.train.size() == 8);
  CHECK(ten.validation.size() == 1);
  CHECK(ten.test.size() == 1);

  const auto big = split_corpus(Numbered(4160), 7);
  CHECK(big.train.size() == 3328);
  CHECK(big.validation.size() == 416);
  CHECK(big.test.size() == 416);

  const auto again = split_corpus(Numbered(4160), 7);
  CHECK(again.train == big.train);
  CHECK(again.test == big.test);

  CHECK_THROWS_AS(split_corpus({}, 1), std::invalid_argument);
}

TEST_CASE("split_corpus is a partition for every seed") {
  const Corpus corpus = Numbered(57);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = split_corpus(corpus, seed);
    std::multiset<std::string> all(s.train.begin(), s.train.end());
    all.insert(s.validation.begin(), s.validation.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == corpus.size());
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == corpus.size());
  }
}

TEST_CASE("apply_style_prefix") {
  SummaryRecord r{"a", "X", {Valid("x")}, StyleLabel::kSquad};
  CHECK(apply_style_prefix(r) == "Style SQuAD: X");
  r.style = StyleLabel::kNq;
  r.summary = "";
  CHECK(apply_style_prefix(r) == "Style NQ: ");
  r.style = StyleLabel::kNewsQa;
  r.summary = "Y";
  CHECK(apply_style_prefix(r) == "Style NewsQA: Y");
  r.style = StyleLabel::kNewsQuizQa;
  CHECK(apply_style_prefix(r) == "Style NewsQuizQA: Y");
  CHECK(ParseStyle("NQ") == StyleLabel::kNq);
  CHECK_THROWS_AS(ParseStyle("nq"), DataError);
}

TEST_CASE("disaggregate and sample_one") {
  const Corpus corpus = {
      Record("a", {Valid("1"), Valid("2"), Valid("3"), Valid("4")}),
      Record("b", {Valid("5"), Valid("6"), Valid("7"), Valid("8")})};
  const auto pairs = disaggregate(corpus, 3);
  CHECK(pairs.size() == 8);
  CHECK(disaggregate(corpus, 3) == pairs);

  // Shuffling never changes the multiset of pairs.
  auto key = [](const TrainingPair& p) {
    return p.record_id + "/" + std::to_string(p.reference_index);
  };
  std::multiset<std::string> first, second;
  for (const auto& p : pairs) first.insert(key(p));
  for (const auto& p : disaggregate(corpus, 99)) second.insert(key(p));
  CHECK(first == second);
  CHECK(pairs[0].input.rfind("Style NewsQuizQA: ", 0) == 0);

  const auto one = sample_one(corpus, 5);
  REQUIRE(one.size() == 2);
  CHECK(one[0].record_id == "a");
  CHECK(one[0].target == corpus[0].references[one[0].reference_index]);
  CHECK(sample_one(corpus, 5) == one);
}

TEST_CASE("JSONL round trip and field mapping") {
  const Corpus corpus = {Record("a", {Valid("1"), Valid("2")}, StyleLabel::kNq)};
  std::stringstream buffer;
  WriteCorpus(buffer, corpus);
  CHECK(ReadCorpus(buffer) == corpus);

  std::istringstream mapped(
      R"({"sid": 12, "text": "t", "qas": [{"q": "Who?", "a": "Me"}]})"
      "\n\n");
  CorpusFieldMap fields;
  fields.id = "sid";
  fields.summary = "text";
  fields.references = "qas";
  fields.question = "q";
  fields.answer = "a";
  const Corpus read = ReadCorpus(mapped, fields);
  REQUIRE(read.size() == 1);
  CHECK(read[0].id == "12");
  CHECK(read[0].style == StyleLabel::kNewsQuizQa);
  CHECK(read[0].references[0] == QAPair{"Who?", "Me"});
}

TEST_CASE("ReadCorpus rejects bad input with a line number") {
  std::istringstream bad("{\"id\": \"a\", \"summary\": \"s\", \"references\": "
                         "[{\"question\": \"q?\", \"answer\": \"a\"}]}\n{oops\n");
  CHECK_THROWS_WITH_AS(ReadCorpus(bad), doctest::Contains("line 2"), DataError);
  std::istringstream dup(
      "{\"id\": \"a\", \"summary\": \"s\", \"references\": [{\"question\": "
      "\"q?\", \"answer\": \"a\"}]}\n"
      "{\"id\": \"a\", \"summary\": \"s\", \"references\": [{\"question\": "
      "\"q?\", \"answer\": \"a\"}]}\n");
  CHECK_THROWS_AS(ReadCorpus(dup), DataError);
  std::istringstream no_refs(
      "{\"id\": \"a\", \"summary\": \"s\", \"references\": []}\n");
  CHECK_THROWS_AS(ReadCorpus(no_refs), DataError);
}

}  // namespace
}  // namespace quizsmith
