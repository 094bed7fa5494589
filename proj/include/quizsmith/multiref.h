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

#ifndef QUIZSMITH_MULTIREF_H_
#define QUIZSMITH_MULTIREF_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quizsmith/toy_model.h"

namespace quizsmith {

// Per-token teacher-forcing losses, one row per reference. Entries at or
// beyond a row's length are padding and must be zero.
struct LossMatrix {
  Eigen::MatrixXd values;
  std::vector<int> lengths;

  int references() const { return static_cast<int>(values.rows()); }
  // Throws std::invalid_argument when an invariant is broken.
  void Validate() const;
};

struct MinRefResult {
  double loss = 0.0;
  int selected = 0;
};

// min_i (1/l_i) sum_j L_ij, ties to the lowest index.
MinRefResult min_ref_loss(const LossMatrix& m);
// min_i sum_j L_ij, ties to the lowest index.
MinRefResult min_ref_loss_unnorm(const LossMatrix& m);

LossMatrix build_loss_matrix(const ModelParams& params,
                             std::span<const TokenId> input,
                             std::span<const TokenIds> references,
                             TokenId bos, TokenId eos);

enum class Strategy { kDisaggregate, kSampleOne, kMinRef, kMinRefUnnorm };

std::string_view StrategyName(Strategy strategy);
// Accepts "disaggregate", "sample-one", "min-ref", "min-ref-unnorm".
Strategy ParseStrategy(std::string_view name);

struct TrainingExample {
  std::string id;
  TokenIds input;
  std::vector<TokenIds> references;  // each ends with <eos>
};

struct Batch {
  std::vector<size_t> groups;
  size_t rows = 0;
};

// Packs whole groups, in the given order, into batches of at most
// batch_rows rows. Throws std::invalid_argument when a group is larger than
// a batch.
std::vector<Batch> pack_batches(std::span<const size_t> group_rows,
                                size_t batch_rows);
std::vector<Batch> pack_batches(std::span<const TrainingExample> examples,
                                size_t batch_rows);

struct TrainConfig {
  Strategy strategy = Strategy::kMinRef;
  int steps = 1;
  double learning_rate = 0.1;
  uint64_t seed = 0;
  // Rows (reference sequences) per step.
  size_t batch_rows = 32;
};

struct TraceEntry {
  int step = 0;
  std::string example_id;
  int selected_ref = 0;
  double loss = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<TraceEntry> trace;
  std::vector<double> step_losses;  // mean example loss before each update
};

// Minimum-reference strategies re-select the reference on every step and
// back-propagate only through the selected row. Per-example gradients are
// summed across the batch.
TrainResult train(const TrainConfig& config, const ModelParams& initial,
                  std::span<const TrainingExample> examples, TokenId bos,
                  TokenId eos);

}  // namespace quizsmith

#endif  // QUIZSMITH_MULTIREF_H_
