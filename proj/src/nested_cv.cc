/*
 * Copyright 2026 The freshkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "freshkit/nested_cv.h"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <set>

#include "freshkit/error.h"
#include "freshkit/hygiene.h"
#include "freshkit/rng.h"
#include "freshkit/stats.h"

namespace freshkit {
namespace {

// Best first: higher accuracy, then lower weight decay, then grid order.
std::vector<size_t> RankCandidates(const std::vector<CandidateScore>& scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a].mean_accuracy != scores[b].mean_accuracy) {
      return scores[a].mean_accuracy > scores[b].mean_accuracy;
    }
    if (scores[a].config.weight_decay != scores[b].config.weight_decay) {
      return scores[a].config.weight_decay < scores[b].config.weight_decay;
    }
    return a < b;
  });
  return order;
}

std::vector<size_t> Difference(const std::vector<size_t>& all,
                               const std::vector<size_t>& remove) {
  std::vector<size_t> out;
  std::set_difference(all.begin(), all.end(), remove.begin(), remove.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<double> ReadList(const nlohmann::json& json, const char* key) {
  return json.at(key).get<std::vector<double>>();
}

}  // namespace

void HyperGrid::Validate() const {
  for (const auto* set : {&head_lr, &weight_decay, &label_smoothing, &backbone_lr,
                          &mixup_alpha}) {
    if (set->empty()) {
      throw Error(ErrorCode::kInvalidArgument, "every hyperparameter set must be non-empty");
    }
  }
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  if (hidden_dim < 0) throw Error(ErrorCode::kInvalidArgument, "hidden_dim must be >= 0");
  ValidateTrainConfig(base);
}

HyperGrid HyperGrid::FromJson(const nlohmann::json& json) {
  HyperGrid grid = DefaultHyperGrid();
  try {
    if (json.contains("head_lr")) grid.head_lr = ReadList(json, "head_lr");
    if (json.contains("weight_decay")) grid.weight_decay = ReadList(json, "weight_decay");
    if (json.contains("label_smoothing")) {
      grid.label_smoothing = ReadList(json, "label_smoothing");
    }
    if (json.contains("backbone_lr")) grid.backbone_lr = ReadList(json, "backbone_lr");
    if (json.contains("mixup_alpha")) grid.mixup_alpha = ReadList(json, "mixup_alpha");
    grid.top_k = json.value("top_k", grid.top_k);
    grid.hidden_dim = json.value("hidden_dim", grid.hidden_dim);
    grid.base.epochs = json.value("epochs", grid.base.epochs);
    grid.base.batch_size = json.value("batch_size", grid.base.batch_size);
    grid.base.head_warmup_epochs =
        json.value("head_warmup_epochs", grid.base.head_warmup_epochs);
    grid.base.rebalance = json.value("rebalance", grid.base.rebalance);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, std::string("bad grid JSON: ") + e.what());
  }
  grid.Validate();
  return grid;
}

nlohmann::json HyperGrid::ToJson() const {
  return nlohmann::json{{"head_lr", head_lr},
                        {"weight_decay", weight_decay},
                        {"label_smoothing", label_smoothing},
                        {"backbone_lr", backbone_lr},
                        {"mixup_alpha", mixup_alpha},
                        {"top_k", top_k},
                        {"hidden_dim", hidden_dim},
                        {"epochs", base.epochs},
                        {"batch_size", base.batch_size},
                        {"head_warmup_epochs", base.head_warmup_epochs},
                        {"rebalance", base.rebalance}};
}

HyperGrid DefaultHyperGrid() {
  HyperGrid grid;
  grid.head_lr = {0.05, 0.2};
  grid.weight_decay = {1e-4, 1e-2};
  grid.label_smoothing = {0.0, 0.1};
  grid.backbone_lr = {0.01, 0.05};
  grid.mixup_alpha = {0.0, 0.2};
  grid.top_k = 2;
  grid.hidden_dim = 8;
  grid.base.epochs = 15;
  grid.base.batch_size = 32;
  grid.base.head_warmup_epochs = 1;
  return grid;
}

InnerSelection InnerSelect(const HyperGrid& grid, const Dataset& data,
                           const FoldPlan& plan, int outer_index, uint64_t seed) {
  grid.Validate();
  if (outer_index < 0 || outer_index >= static_cast<int>(plan.outer.size())) {
    throw Error(ErrorCode::kInvalidArgument, "outer fold index out of range");
  }
  if (plan.num_samples != data.size()) {
    throw Error(ErrorCode::kLengthMismatch, "fold plan does not cover the dataset");
  }
  const auto& outer = plan.outer[outer_index];
  const int input_dim = static_cast<int>(data.x.empty() ? 0 : data.x.front().size());
  const uint64_t fold_seed = DeriveSeed(seed, static_cast<uint64_t>(outer_index));

  InnerSelection selection;
  std::set<size_t> used;
  auto evaluate = [&](const TrainConfig& config, int stage) {
    CandidateScore score;
    score.stage = stage;
    score.config = config;
    for (size_t j = 0; j < outer.inner.size(); ++j) {
      const auto& validation = outer.inner[j].validation;
      const auto fit_ids = Difference(outer.train, validation);
      used.insert(fit_ids.begin(), fit_ids.end());
      used.insert(validation.begin(), validation.end());
      TrainConfig run = config;
      run.seed = DeriveSeed(fold_seed, 1 + j);
      const auto init = TinyClassifier::Random(input_dim, grid.hidden_dim,
                                               data.num_classes, DeriveSeed(fold_seed, 0));
      const auto trained = Train(init, data.Subset(fit_ids), run);
      score.fold_accuracy.push_back(Accuracy(trained.model, data.Subset(validation)));
    }
    score.mean_accuracy = Mean(score.fold_accuracy);
    return score;
  };

  std::vector<CandidateScore> stage1;
  for (double head_lr : grid.head_lr) {
    for (double wd : grid.weight_decay) {
      for (double ls : grid.label_smoothing) {
        TrainConfig config = grid.base;
        config.head_lr = head_lr;
        config.weight_decay = wd;
        config.label_smoothing = ls;
        config.backbone_lr = 0.0;
        config.mixup_alpha = 0.0;
        stage1.push_back(evaluate(config, 1));
      }
    }
  }
  const auto ranked1 = RankCandidates(stage1);
  const size_t survivors = std::min(static_cast<size_t>(grid.top_k), ranked1.size());

  std::vector<CandidateScore> stage2;
  for (size_t s = 0; s < survivors; ++s) {
    const auto& base = stage1[ranked1[s]].config;
    for (double backbone_lr : grid.backbone_lr) {
      for (double mixup : grid.mixup_alpha) {
        TrainConfig config = base;
        config.backbone_lr = backbone_lr;
        config.mixup_alpha = mixup;
        stage2.push_back(evaluate(config, 2));
      }
    }
  }
  const auto ranked2 = RankCandidates(stage2);
  selection.best = stage2[ranked2.front()].config;
  selection.candidates = std::move(stage1);
  selection.candidates.insert(selection.candidates.end(), stage2.begin(), stage2.end());
  selection.used_ids.assign(used.begin(), used.end());
  return selection;
}

NestedCvResult NestedCvRun(const HyperGrid& grid, const Dataset& data, int outer,
                           int inner, uint64_t seed) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  const auto plan = NestedFoldPlan(data.y, data.num_classes, outer, inner, seed);
  AuditFoldPlan(plan);
  const int input_dim = static_cast<int>(data.x.front().size());

  NestedCvResult result;
  bool leak_free = true;
  std::vector<double> accuracies;
  for (int f = 0; f < outer; ++f) {
    const auto& fold = plan.outer[f];
    auto selection = InnerSelect(grid, data, plan, f, seed);

    // Neither selection nor refitting may touch this fold's test ids.
    std::vector<size_t> touched = selection.used_ids;
    touched.insert(touched.end(), fold.train.begin(), fold.train.end());
    std::sort(touched.begin(), touched.end());
    std::vector<size_t> overlap;
    std::set_intersection(touched.begin(), touched.end(), fold.test.begin(),
                          fold.test.end(), std::back_inserter(overlap));
    leak_free = leak_free && overlap.empty();

    const uint64_t fold_seed = DeriveSeed(seed, static_cast<uint64_t>(f));
    TrainConfig config = selection.best;
    config.seed = DeriveSeed(fold_seed, 0x5eed);
    const auto init = TinyClassifier::Random(input_dim, grid.hidden_dim,
                                             data.num_classes, DeriveSeed(fold_seed, 0));
    const auto trained = Train(init, data.Subset(fold.train), config);

    OuterFoldResult fold_result;
    fold_result.accuracy = Accuracy(trained.model, data.Subset(fold.test));
    fold_result.selected = selection.best;
    fold_result.candidates = std::move(selection.candidates);
    accuracies.push_back(fold_result.accuracy);
    result.folds.push_back(std::move(fold_result));
  }
  result.mean_accuracy = Mean(accuracies);
  result.sd_accuracy = SampleStdDev(accuracies);
  result.leakage_audit_passed = leak_free;
  return result;
}

}  // namespace freshkit
