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

#include "freshkit/demo.h"

#include <memory>
#include <random>

#include "freshkit/cls_eval.h"
#include "freshkit/error.h"
#include "freshkit/hygiene.h"
#include "freshkit/nested_cv.h"
#include "freshkit/ood_eval.h"
#include "freshkit/rng.h"
#include "freshkit/scoring.h"
#include "freshkit/stats.h"

namespace freshkit {
namespace {

constexpr int kNumClasses = 4;

std::vector<double> Sample(Rng& rng, const std::vector<double>& mean, double spread) {
  std::normal_distribution<double> noise(0.0, spread);
  std::vector<double> x(mean.size());
  for (size_t d = 0; d < mean.size(); ++d) x[d] = mean[d] + noise(rng);
  return x;
}

// Class c sits at +/- separation on axis c / 2.
std::vector<double> ClassMean(int c, const DemoOptions& options) {
  std::vector<double> mean(options.dim, 0.0);
  mean[c / 2] = (c % 2 == 0 ? 1.0 : -1.0) * options.separation;
  return mean;
}

std::vector<std::vector<double>> SampleOod(Rng& rng, int count, const DemoOptions& options) {
  const std::vector<double> origin(options.dim, 0.0);
  std::vector<std::vector<double>> out;
  for (int i = 0; i < count; ++i) out.push_back(Sample(rng, origin, options.spread));
  return out;
}

// The configuration picked most often across outer folds; ties go to the
// earliest fold.
TrainConfig MostFrequentSelection(const NestedCvResult& result) {
  size_t best = 0;
  int best_count = 0;
  for (size_t i = 0; i < result.folds.size(); ++i) {
    int count = 0;
    for (const auto& f : result.folds) count += f.selected == result.folds[i].selected;
    if (count > best_count) {
      best_count = count;
      best = i;
    }
  }
  return result.folds[best].selected;
}

std::vector<double> AllScores(const TinyClassifier& model,
                              const std::vector<std::vector<double>>& xs, ScoreMethod method,
                              const OdinConfig& odin) {
  std::vector<double> out;
  for (const auto& x : xs) {
    out.push_back(method == ScoreMethod::kOdin ? OdinScore(model, x, odin)
                                               : DetectorScore(method, model.Forward(x)));
  }
  return out;
}

}  // namespace

DemoResult RunDemo(uint64_t seed, const DemoOptions& options) {
  if (options.per_class < 10 || options.ood_test < 1 || options.ood_validation < 1 ||
      options.dim < 2 || !(options.spread > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "demo options out of range");
  }
  Rng data_rng = MakeRng(seed, 1);
  Dataset all;
  all.num_classes = kNumClasses;
  for (int i = 0; i < options.per_class; ++i) {
    for (int c = 0; c < kNumClasses; ++c) {
      all.x.push_back(Sample(data_rng, ClassMean(c, options), options.spread));
      all.y.push_back(c);
    }
  }
  Rng ood_rng = MakeRng(seed, 2);
  const auto ood_test = SampleOod(ood_rng, options.ood_test, options);
  const auto ood_val = SampleOod(ood_rng, options.ood_validation, options);

  const auto split = StratifiedSplit(all.y, kNumClasses, {0.70, 0.15, 0.15}, DeriveSeed(seed, 3));
  std::array<std::vector<size_t>, 3> parts;
  for (size_t i = 0; i < split.part.size(); ++i) {
    parts[static_cast<int>(split.part[i])].push_back(i);
  }
  const Dataset train = all.Subset(parts[0]);
  const Dataset val = all.Subset(parts[1]);
  const Dataset test = all.Subset(parts[2]);

  const HyperGrid grid = DefaultHyperGrid();
  const auto nested = NestedCvRun(grid, train, 5, 3, DeriveSeed(seed, 4));

  const auto init = TinyClassifier::Random(options.dim, grid.hidden_dim, kNumClasses,
                                           DeriveSeed(seed, 5));
  TrainConfig selected = MostFrequentSelection(nested);
  selected.seed = DeriveSeed(seed, 6);
  TrainConfig baseline = grid.base;
  baseline.head_lr = grid.head_lr.front();
  baseline.weight_decay = grid.weight_decay.front();
  baseline.label_smoothing = grid.label_smoothing.front();
  baseline.seed = selected.seed;
  const auto model = Train(init, train, selected).model;
  const auto baseline_model = Train(init, train, baseline).model;

  // Classification on the held-out test split.
  std::vector<int> predicted;
  auto correct_a = std::make_unique<bool[]>(test.size());
  auto correct_b = std::make_unique<bool[]>(test.size());
  for (size_t i = 0; i < test.size(); ++i) {
    predicted.push_back(model.Predict(test.x[i]));
    correct_a[i] = predicted.back() == test.y[i];
    correct_b[i] = baseline_model.Predict(test.x[i]) == test.y[i];
  }
  const auto cm = Confusion(test.y, predicted, kNumClasses);
  const auto prf = PrfFromConfusion(cm);

  // ODIN (T, epsilon) chosen on validation ID vs. validation OOD by AUROC.
  OdinConfig odin{kDefaultOdinTemperatures[0], kDefaultOdinEpsilons[0]};
  double best_val_auroc = -1.0;
  for (double t : kDefaultOdinTemperatures) {
    for (double eps : kDefaultOdinEpsilons) {
      const OdinConfig candidate{t, eps};
      const double auroc = Auroc(AllScores(model, val.x, ScoreMethod::kOdin, candidate),
                                 AllScores(model, ood_val, ScoreMethod::kOdin, candidate));
      if (auroc > best_val_auroc) {
        best_val_auroc = auroc;
        odin = candidate;
      }
    }
  }

  DemoResult result;
  Json ood;
  for (auto method : {ScoreMethod::kMsp, ScoreMethod::kEnergy, ScoreMethod::kOdin}) {
    const auto id_scores = AllScores(model, test.x, method, odin);
    const auto ood_scores = AllScores(model, ood_test, method, odin);
    std::vector<ScoredSample> samples;
    for (double s : id_scores) samples.push_back({"", s, true});
    for (double s : ood_scores) samples.push_back({"", s, false});
    const auto metrics = OodMetrics(samples);
    Json entry = OodReportJson(metrics);
    if (method == ScoreMethod::kOdin) {
      entry["temperature"] = odin.temperature;
      entry["epsilon"] = odin.epsilon;
      entry["validation_auroc"] = RoundFixed(best_val_auroc);
      result.auroc_odin = metrics.auroc;
    } else if (method == ScoreMethod::kMsp) {
      result.auroc_msp = metrics.auroc;
    } else {
      result.auroc_energy = metrics.auroc;
    }
    ood[std::string(ScoreMethodName(method))] = std::move(entry);
  }

  // Abstention sweep on MSP confidences over the pooled ID test + OOD set.
  std::vector<double> id_conf = AllScores(model, test.x, ScoreMethod::kMsp, odin);
  std::vector<double> ood_conf = AllScores(model, ood_test, ScoreMethod::kMsp, odin);
  std::vector<double> pooled = id_conf;
  pooled.insert(pooled.end(), ood_conf.begin(), ood_conf.end());

  Json report = NewReport("demo", seed);
  Json counts = Json::array();
  for (const auto& row : split.counts) counts.push_back(Json::array({row[0], row[1], row[2]}));
  report["data"] = Json{{"num_classes", kNumClasses},
                        {"dim", options.dim},
                        {"per_class", options.per_class},
                        {"ood_test", options.ood_test},
                        {"ood_validation", options.ood_validation},
                        {"split_counts", std::move(counts)}};
  report["nested_cv"] = NestedCvJson(nested);
  report["selected_config"] = TrainConfigReport(selected);
  report["classification"] = Json{{"accuracy", RoundFixed(cm.accuracy())},
                                  {"metrics", PrfJson(prf, ClassSpace().names())},
                                  {"confusion", ConfusionJson(cm)}};
  report["ood"] = std::move(ood);
  report["sweep"] = Json{{"pooled", SweepJson(ThresholdSweep(pooled, kDefaultTaus))},
                         {"id", SweepJson(ThresholdSweep(id_conf, kDefaultTaus))},
                         {"ood", SweepJson(ThresholdSweep(ood_conf, kDefaultTaus))}};
  Json comparison = McNemarJson(TabulatePaired(std::span<const bool>(correct_a.get(), test.size()),
                                                 std::span<const bool>(correct_b.get(), test.size())));
  comparison["config_a"] = TrainConfigReport(selected);
  comparison["config_b"] = TrainConfigReport(baseline);
  report["mcnemar"] = std::move(comparison);

  result.report = std::move(report);
  result.test_accuracy = cm.accuracy();
  result.leakage_audit_passed = nested.leakage_audit_passed;
  return result;
}

}  // namespace freshkit
