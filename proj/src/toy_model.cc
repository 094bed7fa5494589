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

#include "quizsmith/toy_model.h"

#include <cmath>
#include <stdexcept>

#include "quizsmith/error.h"

namespace quizsmith {
namespace {

void CheckToken(const ModelParams& params, TokenId token) {
  if (token < 0 || token >= params.vocab_size()) {
    throw std::out_of_range("token id " + std::to_string(token) +
                            " outside vocabulary of size " +
                            std::to_string(params.vocab_size()));
  }
}

// Mean of one-hot input vectors, kept sparse as (id, weight) pairs.
std::vector<std::pair<TokenId, double>> InputContext(
    const ModelParams& params, std::span<const TokenId> input) {
  std::vector<std::pair<TokenId, double>> context;
  if (input.empty()) return context;
  const double weight = 1.0 / static_cast<double>(input.size());
  for (const TokenId token : input) {
    CheckToken(params, token);
    context.emplace_back(token, weight);
  }
  return context;
}

Eigen::VectorXd LogitsFromContext(
    const ModelParams& params,
    const std::vector<std::pair<TokenId, double>>& context, TokenId prev) {
  CheckToken(params, prev);
  Eigen::VectorXd logits = params.bias + params.transition.col(prev);
  for (const auto& [token, weight] : context) {
    logits += weight * params.context.col(token);
  }
  return logits;
}

std::vector<double> Flatten(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

Eigen::MatrixXd Unflatten(const std::vector<double>& flat, int dim) {
  if (flat.size() != static_cast<size_t>(dim) * dim) {
    throw DataError("checkpoint matrix has " + std::to_string(flat.size()) +
                    " entries, expected " + std::to_string(dim * dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = flat[r * dim + c];
  }
  return m;
}

}  // namespace

Vocab::Vocab(const std::vector<std::string>& symbols) {
  for (const auto special : {kBos, kEos, kPad}) {
    index_.emplace(std::string(special), static_cast<TokenId>(symbols_.size()));
    symbols_.emplace_back(special);
  }
  for (const auto& symbol : symbols) {
    if (index_.emplace(symbol, static_cast<TokenId>(symbols_.size())).second) {
      symbols_.push_back(symbol);
    }
  }
}

bool Vocab::contains(std::string_view symbol) const {
  return index_.count(std::string(symbol)) > 0;
}

TokenId Vocab::id(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  if (it == index_.end()) {
    throw std::out_of_range("unknown token \"" + std::string(symbol) + "\"");
  }
  return it->second;
}

const std::string& Vocab::symbol(TokenId id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("token id " + std::to_string(id) +
                            " outside vocabulary");
  }
  return symbols_[id];
}

TokenIds Vocab::encode(std::span<const std::string> tokens) const {
  TokenIds ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) ids.push_back(id(token));
  return ids;
}

TokenIds Vocab::encode_known(std::span<const std::string> tokens) const {
  TokenIds ids;
  for (const auto& token : tokens) {
    if (const auto it = index_.find(token); it != index_.end()) {
      ids.push_back(it->second);
    }
  }
  return ids;
}

std::string Vocab::decode(std::span<const TokenId> ids) const {
  std::string text;
  for (const TokenId token : ids) {
    if (token == eos()) break;
    if (!text.empty()) text.push_back(' ');
    text += symbol(token);
  }
  return text;
}

ModelParams ModelParams::Zero(int vocab_size) {
  return {Eigen::MatrixXd::Zero(vocab_size, vocab_size),
          Eigen::MatrixXd::Zero(vocab_size, vocab_size),
          Eigen::VectorXd::Zero(vocab_size)};
}

Eigen::VectorXd forward_logits(const ModelParams& params,
                               std::span<const TokenId> input,
                               TokenId prev_token) {
  return LogitsFromContext(params, InputContext(params, input), prev_token);
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits) {
  const double max = logits.maxCoeff();
  const double log_norm =
      max + std::log((logits.array() - max).exp().sum());
  return (logits.array() - log_norm).matrix();
}

std::vector<double> token_losses(const ModelParams& params,
                                 std::span<const TokenId> input,
                                 std::span<const TokenId> target, TokenId bos,
                                 TokenId eos) {
  if (target.empty() || target.back() != eos) {
    throw std::invalid_argument("token_losses: target must end with <eos>");
  }
  const auto context = InputContext(params, input);
  std::vector<double> losses;
  losses.reserve(target.size());
  TokenId prev = bos;
  for (const TokenId token : target) {
    CheckToken(params, token);
    losses.push_back(-log_softmax(LogitsFromContext(params, context, prev))(token));
    prev = token;
  }
  return losses;
}

ModelParams gradients(const ModelParams& params,
                      std::span<const WeightedExample> batch, TokenId bos) {
  ModelParams grad = ModelParams::Zero(params.vocab_size());
  for (const auto& example : batch) {
    if (!std::isfinite(example.weight)) {
      throw std::invalid_argument("gradients: non-finite example weight");
    }
    if (example.weight == 0.0) continue;
    const auto context = InputContext(params, example.input);
    TokenId prev = bos;
    for (const TokenId token : example.target) {
      CheckToken(params, token);
      Eigen::VectorXd dlogits =
          log_softmax(LogitsFromContext(params, context, prev)).array().exp();
      dlogits(token) -= 1.0;
      dlogits *= example.weight;
      for (const auto& [input_token, weight] : context) {
        grad.context.col(input_token) += weight * dlogits;
      }
      grad.transition.col(prev) += dlogits;
      grad.bias += dlogits;
      prev = token;
    }
  }
  return grad;
}

ModelParams sgd_step(const ModelParams& params, const ModelParams& gradient,
                     double learning_rate) {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("sgd_step: learning rate must be positive");
  }
  return {params.context - learning_rate * gradient.context,
          params.transition - learning_rate * gradient.transition,
          params.bias - learning_rate * gradient.bias};
}

nlohmann::json CheckpointToJson(const Checkpoint& checkpoint) {
  const auto& p = checkpoint.params;
  return {{"vocab", checkpoint.vocab.symbols()},
          {"dim", p.vocab_size()},
          {"context", Flatten(p.context)},
          {"transition", Flatten(p.transition)},
          {"bias", std::vector<double>(p.bias.data(),
                                       p.bias.data() + p.bias.size())}};
}

Checkpoint CheckpointFromJson(const nlohmann::json& json) {
  try {
    auto symbols = json.at("vocab").get<std::vector<std::string>>();
    const int dim = json.at("dim").get<int>();
    if (symbols.size() < 3 || symbols[0] != Vocab::kBos ||
        symbols[1] != Vocab::kEos || symbols[2] != Vocab::kPad) {
      throw DataError("checkpoint vocab must start with <bos> <eos> <pad>");
    }
    Checkpoint checkpoint{
        Vocab(std::vector<std::string>(symbols.begin() + 3, symbols.end())),
        {}};
    if (checkpoint.vocab.size() != dim ||
        static_cast<size_t>(dim) != symbols.size()) {
      throw DataError("checkpoint vocab size does not match dim");
    }
    const auto bias = json.at("bias").get<std::vector<double>>();
    if (bias.size() != static_cast<size_t>(dim)) {
      throw DataError("checkpoint bias has wrong length");
    }
    checkpoint.params.context =
        Unflatten(json.at("context").get<std::vector<double>>(), dim);
    checkpoint.params.transition =
        Unflatten(json.at("transition").get<std::vector<double>>(), dim);
    checkpoint.params.bias =
        Eigen::Map<const Eigen::VectorXd>(bias.data(), dim);
    return checkpoint;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace quizsmith
