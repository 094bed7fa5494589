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

#ifndef QUIZSMITH_TOY_MODEL_H_
#define QUIZSMITH_TOY_MODEL_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace quizsmith {

using TokenId = int;
using TokenIds = std::vector<TokenId>;

// Symbol table. Ids 0..2 are always <bos>, <eos>, <pad>.
class Vocab {
 public:
  static constexpr std::string_view kBos = "<bos>";
  static constexpr std::string_view kEos = "<eos>";
  static constexpr std::string_view kPad = "<pad>";

  Vocab() : Vocab(std::vector<std::string>{}) {}
  // Specials are prepended; duplicates of earlier symbols are ignored.
  explicit Vocab(const std::vector<std::string>& symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  TokenId bos() const { return 0; }
  TokenId eos() const { return 1; }
  TokenId pad() const { return 2; }

  bool contains(std::string_view symbol) const;
  // Throws std::out_of_range for unknown symbols.
  TokenId id(std::string_view symbol) const;
  const std::string& symbol(TokenId id) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  TokenIds encode(std::span<const std::string> tokens) const;
  // Drops symbols the vocabulary does not know.
  TokenIds encode_known(std::span<const std::string> tokens) const;
  // Space-joined symbols, stopping at (and excluding) <eos>.
  std::string decode(std::span<const TokenId> ids) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TokenId> index_;
};

// logits = context * mean_onehot(input) + transition * onehot(prev) + bias.
// Gradients share this layout.
struct ModelParams {
  Eigen::MatrixXd context;
  Eigen::MatrixXd transition;
  Eigen::VectorXd bias;

  static ModelParams Zero(int vocab_size);
  int vocab_size() const { return static_cast<int>(bias.size()); }
};

Eigen::VectorXd forward_logits(const ModelParams& params,
                               std::span<const TokenId> input,
                               TokenId prev_token);

// Numerically stable log-softmax.
Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);

// Teacher-forced cross-entropy per target position, with <bos> before the
// first position. The target must end with <eos>.
std::vector<double> token_losses(const ModelParams& params,
                                 std::span<const TokenId> input,
                                 std::span<const TokenId> target,
                                 TokenId bos, TokenId eos);

struct WeightedExample {
  std::span<const TokenId> input;
  std::span<const TokenId> target;
  double weight = 1.0;
};

// Gradient of sum_e weight_e * sum_t loss_t(e).
ModelParams gradients(const ModelParams& params,
                      std::span<const WeightedExample> batch, TokenId bos);

ModelParams sgd_step(const ModelParams& params, const ModelParams& gradient,
                     double learning_rate);

struct Checkpoint {
  Vocab vocab;
  ModelParams params;
};

// {"vocab": [...], "dim": V, "context": [...], "transition": [...],
//  "bias": [...]} with matrices flattened row-major.
nlohmann::json CheckpointToJson(const Checkpoint& checkpoint);
Checkpoint CheckpointFromJson(const nlohmann::json& json);

}  // namespace quizsmith

#endif  // QUIZSMITH_TOY_MODEL_H_
