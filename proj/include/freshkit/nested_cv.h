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

// Two-stage inner-loop hyperparameter selection and the nested CV driver.
//
// Stage 1 ("head warm-up") trains with the backbone frozen and searches head
// learning rate, weight decay and label smoothing. The best `top_k` stage-1
// configurations advance to stage 2 ("unfreeze refinement"), which searches
// backbone learning rate and MixUp alpha. Candidates are ranked by mean inner
// validation accuracy; ties go to the lower weight decay, then to the earlier
// candidate in grid order.

#ifndef FRESHKIT_NESTED_CV_H_
#define FRESHKIT_NESTED_CV_H_

#include <cstdint>
#include <vector>

#include "freshkit/data_model.h"
#include "freshkit/tiny_model.h"
#include "json.hpp"

namespace freshkit {

struct HyperGrid {
  std::vector<double> head_lr;
  std::vector<double> weight_decay;
  std::vector<double> label_smoothing;
  std::vector<double> backbone_lr;
  std::vector<double> mixup_alpha;
  int top_k = 2;

  // Shared, non-searched settings (epochs, batch size, warm-up, rebalance).
  TrainConfig base;
  // Hidden width of the model trained for every candidate.
  int hidden_dim = 8;

  void Validate() const;
  static HyperGrid FromJson(const nlohmann::json& json);
  nlohmann::json ToJson() const;
};

struct CandidateScore {
  int stage = 1;
  TrainConfig config;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct InnerSelection {
  TrainConfig best;
  std::vector<CandidateScore> candidates;  // stage 1 then stage 2, grid order
  // Sample indices that were used for fitting or validating candidates.
  std::vector<size_t> used_ids;
};

InnerSelection InnerSelect(const HyperGrid& grid, const Dataset& data,
                           const FoldPlan& plan, int outer_index, uint64_t seed);

struct OuterFoldResult {
  double accuracy = 0.0;
  TrainConfig selected;
  std::vector<CandidateScore> candidates;
};

struct NestedCvResult {
  std::vector<OuterFoldResult> folds;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;  // sample SD (n - 1)
  bool leakage_audit_passed = false;
};

NestedCvResult NestedCvRun(const HyperGrid& grid, const Dataset& data,
                           int outer = 5, int inner = 3, uint64_t seed = 42);

// A small default grid spanning the searched ranges.
HyperGrid DefaultHyperGrid();

}  // namespace freshkit

#endif  // FRESHKIT_NESTED_CV_H_
