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

#ifndef QUIZSMITH_ERROR_H_
#define QUIZSMITH_ERROR_H_

#include <stdexcept>
#include <string>

namespace quizsmith {

// Malformed or inconsistent input data (bad JSONL, unknown ids, exhausted
// candidate pools). Precondition breaches by callers use
// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quizsmith

#endif  // QUIZSMITH_ERROR_H_
