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

// End-to-end run on synthetic features: four Gaussian "freshness" blobs and
// a held-out "No Result" blob that never reaches training.

#ifndef FRESHKIT_DEMO_H_
#define FRESHKIT_DEMO_H_

#include <cstdint>

#include "freshkit/report.h"

namespace freshkit {

struct DemoOptions {
  int per_class = 150;
  int ood_test = 150;
  int ood_validation = 100;  // used only to pick ODIN's (T, epsilon)
  int dim = 8;
  double separation = 4.0;  // distance of each class mean from the origin
  double spread = 0.7;      // per-coordinate standard deviation
};

struct DemoResult {
  Json report;
  double test_accuracy = 0.0;
  double auroc_msp = 0.0;
  double auroc_energy = 0.0;
  double auroc_odin = 0.0;
  bool leakage_audit_passed = false;
};

DemoResult RunDemo(uint64_t seed, const DemoOptions& options = {});

}  // namespace freshkit

#endif  // FRESHKIT_DEMO_H_
