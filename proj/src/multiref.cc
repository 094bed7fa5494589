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

#include "quizsmith/multiref.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace quizsmith {
namespace {

MinRefResult ArgminRow(const LossMatrix& m, bool normalize) {
  m.Validate();
  MinRefResult best;
  for (int i = 0; i < m.references(); ++i) {
    double loss = m.values.row(i).sum();
    if (normalize) loss /= m.lengths[i];
    if (i == 0 || loss < best.loss) best = {loss, i};
  }
  return best;
}

// A unit of training data: a whole example for minimum-reference strategies
// or a single (example, reference) row otherwise.
struct Unit {
  size_t example = 0;
  int reference = -1;  // -1: all references
};

}  // namespace

void LossMatrix::Validate() const {
  if (values.rows() == 0) {
    throw std::invalid_argument("LossMatrix: no references");
  }
  if (lengths.size() != static_cast<size_t>(values.rows())) {
    throw std::invalid_argument("LossMatrix: one length per row required");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const int length = lengths[i];
    if (length < 1 || length > values.cols()) {
      throw std::invalid_argument("LossMatrix: length outside [1, T]");
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (!(values(i, j) >= 0.0)) {
        throw std::invalid_argument("LossMatrix: negative or NaN loss");
      }
      if (j >= length && values(i, j) != 0.0) {
        throw std::invalid_argument("LossMatrix: unmasked padding entry");
      }
    }
  }
}

MinRefResult min_ref_loss(const LossMatrix& m) { return ArgminRow(m, true); }

MinRefResult min_ref_loss_unnorm(const LossMatrix& m) {
  return ArgminRow(m, false);
}

LossMatrix build_loss_matrix(const ModelParams& params,
                             std::span<const TokenId> input,
                             std::span<const TokenIds> references,
                             TokenId bos, TokenId eos) {
  size_t max_len = 0;
  for (const auto& ref : references) max_len = std::max(max_len, ref.size());
  LossMatrix m{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(references.size()),
                                     static_cast<Eigen::Index>(max_len)),
               {}};
  for (size_t i = 0; i < references.size(); ++i) {
    const auto losses = token_losses(params, input, references[i], bos, eos);
    for (size_t j = 0; j < losses.size(); ++j) m.values(i, j) = losses[j];
    m.lengths.push_back(static_cast<int>(losses.size()));
  }
  return m;
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDisaggregate:
      return "disaggregate";
    case Strategy::kSampleOne:
      return "sample-one";
    case Strategy::kMinRef:
      return "min-ref";
    case Strategy::kMinRefUnnorm:
      return "min-ref-unnorm";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (const auto s : {Strategy::kDisaggregate, Strategy::kSampleOne,
                       Strategy::kMinRef, Strategy::kMinRefUnnorm}) {
    if (StrategyName(s) == name) return s;
  }
  throw std::invalid_argument("unknown strategy \"" + std::string(name) + "\"");
}

std::vector<Batch> pack_batches(std::span<const size_t> group_rows,
                                size_t batch_rows) {
  std::vector<Batch> batches;
  Batch current;
  for (size_t g = 0; g < group_rows.size(); ++g) {
    if (group_rows[g] > batch_rows) {
      throw std::invalid_argument(
          "pack_batches: group of " + std::to_string(group_rows[g]) +
          " rows does not fit a batch of " + std::to_string(batch_rows));
    }
    if (current.rows + group_rows[g] > batch_rows) {
      batches.push_back(std::move(current));
      current = {};
    }
    current.groups.push_back(g);
    current.rows += group_rows[g];
  }
  if (!current.groups.empty()) batches.push_back(std::move(current));
  return batches;
}

std::vector<Batch> pack_batches(std::span<const TrainingExample> examples,
                                size_t batch_rows) {
  std::vector<size_t> rows;
  rows.reserve(examples.size());
  for (const auto& e : examples) rows.push_back(e.references.size());
  return pack_batches(rows, batch_rows);
}

TrainResult train(const TrainConfig& config, const ModelParams& initial,
                  std::span<const TrainingExample> examples, TokenId bos,
                  TokenId eos) {
  if (examples.empty()) throw std::invalid_argument("train: empty corpus");
  if (config.steps < 1) throw std::invalid_argument("train: steps < 1");
  for (const auto& e : examples) {
    if (e.references.empty()) {
      throw std::invalid_argument("train: example \"" + e.id +
                                  "\" has no references");
    }
  }
  const bool min_ref = config.strategy == Strategy::kMinRef ||
                       config.strategy == Strategy::kMinRefUnnorm;
  std::mt19937_64 rng(config.seed);

  std::vector<Unit> units;
  for (size_t e = 0; e < examples.size(); ++e) {
    switch (config.strategy) {
      case Strategy::kMinRef:
      case Strategy::kMinRefUnnorm:
        units.push_back({e, -1});
        break;
      case Strategy::kDisaggregate:
        for (size_t r = 0; r < examples[e].references.size(); ++r) {
          units.push_back({e, static_cast<int>(r)});
        }
        break;
      case Strategy::kSampleOne: {
        std::uniform_int_distribution<int> pick(
            0, static_cast<int>(examples[e].references.size()) - 1);
        units.push_back({e, pick(rng)});
        break;
      }
    }
  }
  std::vector<size_t> unit_rows;
  for (const auto& u : units) {
    unit_rows.push_back(u.reference < 0 ? examples[u.example].references.size()
                                        : 1);
  }

  TrainResult result{initial, {}, {}};
  std::vector<size_t> order(units.size());
  std::vector<Batch> epoch;
  size_t next_batch = 0;
  for (int step = 0; step < config.steps; ++step) {
    if (next_batch == epoch.size()) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<size_t> rows;
      for (const size_t u : order) rows.push_back(unit_rows[u]);
      epoch = pack_batches(rows, config.batch_rows);
      for (auto& batch : epoch) {
        for (auto& g : batch.groups) g = order[g];
      }
      next_batch = 0;
    }
    const Batch& batch = epoch[next_batch++];
    // Per-example gradient weights are summed over the batch, not averaged;
    // the reported step loss is the mean.
    const double scale = 1.0 / static_cast<double>(batch.groups.size());

    std::vector<WeightedExample> weighted;
    double step_loss = 0.0;
    for (const size_t u : batch.groups) {
      const Unit& unit = units[u];
      const TrainingExample& example = examples[unit.example];
      int selected = unit.reference;
      double loss = 0.0;
      double weight = 0.0;
      if (min_ref) {
        const LossMatrix m = build_loss_matrix(result.params, example.input,
                                               example.references, bos, eos);
        const bool normalized = config.strategy == Strategy::kMinRef;
        const MinRefResult best =
            normalized ? min_ref_loss(m) : min_ref_loss_unnorm(m);
        selected = best.selected;
        loss = best.loss;
        weight = normalized ? 1.0 / m.lengths[selected] : 1.0;
      } else {
        const auto& target = example.references[selected];
        const auto losses =
            token_losses(result.params, example.input, target, bos, eos);
        loss = std::accumulate(losses.begin(), losses.end(), 0.0) /
               static_cast<double>(losses.size());
        weight = 1.0 / static_cast<double>(target.size());
      }
      weighted.push_back(
          {example.input, example.references[selected], weight});
      result.trace.push_back({step, example.id, selected, loss});
      step_loss += loss * scale;
    }
    result.step_losses.push_back(step_loss);
    result.params = sgd_step(result.params,
                             gradients(result.params, weighted, bos),
                             config.learning_rate);
  }
  return result;
}

}  // namespace quizsmith
