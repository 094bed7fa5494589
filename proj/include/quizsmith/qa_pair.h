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

#ifndef QUIZSMITH_QA_PAIR_H_
#define QUIZSMITH_QA_PAIR_H_

#include <string>

namespace quizsmith {

struct QAPair {
  std::string question;
  std::string answer;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

}  // namespace quizsmith

#endif  // QUIZSMITH_QA_PAIR_H_
