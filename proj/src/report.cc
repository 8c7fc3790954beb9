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

#include "freshkit/report.h"

#include <cmath>

#include "freshkit/ood_eval.h"

namespace freshkit {

double RoundFixed(double value, int decimals) {
  if (!std::isfinite(value)) return value;
  const double scale = std::pow(10.0, decimals);
  const double rounded = std::round(value * scale) / scale;
  return rounded == 0.0 ? 0.0 : rounded;  // no negative zero
}

double RoundSignificant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = digits - 1 - magnitude;
  const double scale = std::pow(10.0, decimals);
  // Divide by an exact power of ten when possible to avoid 5.3200000001.
  return decimals >= 0 ? std::round(value * scale) / scale
                       : std::round(value / std::pow(10.0, -decimals)) *
                             std::pow(10.0, -decimals);
}

Json NewReport(std::string_view command, uint64_t seed) {
  Json report;
  report["schema_version"] = std::string(kReportSchemaVersion);
  report["command"] = std::string(command);
  report["seed"] = seed;
  return report;
}

Json OodReportJson(const OodReport& report) {
  return Json{{"auroc", RoundFixed(report.auroc)},
              {"aupr_in", RoundFixed(report.aupr_in)},
              {"fpr_at_95tpr", RoundFixed(report.fpr_at_95tpr)}};
}

Json SweepJson(std::span<const SweepPoint> points) {
  Json out = Json::array();
  for (const auto& p : points) {
    const double coverage = RoundFixed(p.coverage);
    out.push_back(Json{{"tau", RoundFixed(p.tau)},
                       {"coverage", coverage},
                       {"rejection", 1.0 - coverage},
                       {"reference", p.tau == kReferenceTau}});
  }
  return out;
}

Json McNemarJson(const PairedOutcome& outcome) {
  const auto test = McNemar(outcome);
  const auto ci = PairedAccuracyDiffCi(outcome);
  return Json{{"n11", outcome.n11},
              {"n10", outcome.n10},
              {"n01", outcome.n01},
              {"n00", outcome.n00},
              {"chi2", RoundFixed(test.chi2)},
              {"p", RoundSignificant(test.p)},
              {"delta", RoundFixed(ci.delta)},
              {"ci", Json::array({RoundFixed(ci.lo), RoundFixed(ci.hi)})},
              {"degenerate", test.degenerate}};
}

Json ConfusionJson(const ConfusionMatrix& cm) {
  Json rows = Json::array();
  for (int t = 0; t < cm.num_classes(); ++t) {
    Json row = Json::array();
    for (int p = 0; p < cm.num_classes(); ++p) row.push_back(cm.at(t, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json PrfJson(const PrfReport& report, const std::vector<std::string>& names) {
  Json per_class = Json::array();
  for (size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    per_class.push_back(Json{{"class", c < names.size() ? names[c] : std::to_string(c)},
                             {"precision", RoundFixed(m.precision)},
                             {"recall", RoundFixed(m.recall)},
                             {"f1", RoundFixed(m.f1)},
                             {"support", m.support},
                             {"empty", m.empty},
                             {"zero_division", m.zero_division}});
  }
  return Json{{"per_class", std::move(per_class)},
              {"macro_precision", RoundFixed(report.macro_precision)},
              {"macro_recall", RoundFixed(report.macro_recall)},
              {"macro_f1", RoundFixed(report.macro_f1)},
              {"accuracy", RoundFixed(report.accuracy)}};
}

Json MaskSummaryJson(std::span<const MetricSummary, MaskMetrics::kCount> summary) {
  Json out;
  for (int i = 0; i < MaskMetrics::kCount; ++i) {
    out[std::string(MaskMetricName(i))] =
        Json{{"mean", RoundFixed(summary[i].mean)},
             {"ci", Json::array({RoundFixed(summary[i].lo), RoundFixed(summary[i].hi)})}};
  }
  return out;
}

Json TrainConfigReport(const TrainConfig& config) {
  return Json{{"head_lr", RoundFixed(config.head_lr)},
              {"backbone_lr", RoundFixed(config.backbone_lr)},
              {"weight_decay", RoundFixed(config.weight_decay)},
              {"label_smoothing", RoundFixed(config.label_smoothing)},
              {"mixup_alpha", RoundFixed(config.mixup_alpha)},
              {"batch_size", config.batch_size},
              {"epochs", config.epochs},
              {"head_warmup_epochs", config.head_warmup_epochs},
              {"rebalance", config.rebalance}};
}

Json NestedCvJson(const NestedCvResult& result) {
  Json folds = Json::array();
  for (size_t f = 0; f < result.folds.size(); ++f) {
    const auto& fold = result.folds[f];
    Json candidates = Json::array();
    for (const auto& c : fold.candidates) {
      candidates.push_back(Json{{"stage", c.stage},
                                {"config", TrainConfigReport(c.config)},
                                {"mean_accuracy", RoundFixed(c.mean_accuracy)}});
    }
    folds.push_back(Json{{"fold", f},
                         {"accuracy", RoundFixed(fold.accuracy)},
                         {"selected", TrainConfigReport(fold.selected)},
                         {"candidates", std::move(candidates)}});
  }
  return Json{{"outer_folds", std::move(folds)},
              {"mean_accuracy", RoundFixed(result.mean_accuracy)},
              {"sd_accuracy", RoundFixed(result.sd_accuracy)},
              {"leakage_audit_passed", result.leakage_audit_passed}};
}

std::string DumpReport(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace freshkit
