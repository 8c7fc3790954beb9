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

// JSON report building blocks shared by the CLI and the demo.
//
// Numbers are rounded to 6 decimal places; p-values keep 3 significant
// figures. Keys keep insertion order so repeated runs are byte-identical.

#ifndef FRESHKIT_REPORT_H_
#define FRESHKIT_REPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freshkit/cls_eval.h"
#include "freshkit/data_model.h"
#include "freshkit/nested_cv.h"
#include "freshkit/seg_eval.h"
#include "freshkit/stats.h"
#include "json.hpp"

namespace freshkit {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchemaVersion = "1.0.0";

double RoundFixed(double value, int decimals = 6);
double RoundSignificant(double value, int digits = 3);

// {"schema_version", "command", "seed"}.
Json NewReport(std::string_view command, uint64_t seed);

Json OodReportJson(const OodReport& report);
// Rejection is written as 1 - coverage after rounding so the pair still
// sums to one.
Json SweepJson(std::span<const SweepPoint> points);
Json McNemarJson(const PairedOutcome& outcome);
Json ConfusionJson(const ConfusionMatrix& cm);
Json PrfJson(const PrfReport& report, const std::vector<std::string>& names);
Json MaskSummaryJson(std::span<const MetricSummary, MaskMetrics::kCount> summary);
Json TrainConfigReport(const TrainConfig& config);
Json NestedCvJson(const NestedCvResult& result);

std::string DumpReport(const Json& report);

}  // namespace freshkit

#endif  // FRESHKIT_REPORT_H_
