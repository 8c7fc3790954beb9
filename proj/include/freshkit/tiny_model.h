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

// A small softmax classifier with exact analytic gradients.
//
//   H > 0:  logits = W2 * tanh(W1 * x + b1) + b2
//   H = 0:  logits = W2 * x + b2
//
// (W1, b1) form the "backbone" parameter group and (W2, b2) the "head". The
// two groups get separate learning rates during training; a backbone learning
// rate of zero freezes it bit-exactly.

#ifndef FRESHKIT_TINY_MODEL_H_
#define FRESHKIT_TINY_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace freshkit {

// Anything that maps an input vector to logits and can back-propagate a
// logit-space cotangent to the input. ODIN only needs this surface.
class DifferentiableClassifier {
 public:
  virtual ~DifferentiableClassifier() = default;

  virtual int input_dim() const = 0;
  virtual int num_classes() const = 0;
  virtual std::vector<double> Forward(std::span<const double> x) const = 0;
  // Returns d<upstream, f(x)>/dx.
  virtual std::vector<double> InputGradient(
      std::span<const double> x, std::span<const double> upstream) const = 0;
};

class TinyClassifier : public DifferentiableClassifier {
 public:
  // All parameters zero.
  TinyClassifier(int input_dim, int hidden_dim, int num_classes);

  // Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)), zero biases.
  static TinyClassifier Random(int input_dim, int hidden_dim, int num_classes,
                               uint64_t seed);

  int input_dim() const override { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  int num_classes() const override { return num_classes_; }

  std::vector<double> Forward(std::span<const double> x) const override;
  std::vector<double> InputGradient(
      std::span<const double> x,
      std::span<const double> upstream) const override;

  int Predict(std::span<const double> x) const;

  // Flat parameter vector: [W1 (H x D), b1 (H), W2 (C x K), b2 (C)], row-major,
  // K = H if H > 0 else D.
  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params() { return params_; }
  size_t backbone_size() const;  // |W1| + |b1|
  size_t num_params() const { return params_.size(); }

  double& w1(int h, int d);
  double& b1(int h);
  double& w2(int c, int k);
  double& b2(int c);

  nlohmann::json ToJson() const;
  static TinyClassifier FromJson(const nlohmann::json& json);

  bool operator==(const TinyClassifier& other) const {
    return input_dim_ == other.input_dim_ && hidden_dim_ == other.hidden_dim_ &&
           num_classes_ == other.num_classes_ && params_ == other.params_;
  }

  int head_input_dim() const { return hidden_dim_ > 0 ? hidden_dim_ : input_dim_; }
  size_t b1_offset() const;
  size_t w2_offset() const;
  size_t b2_offset() const;
  // Hidden activations tanh(W1 x + b1); empty for linear models.
  std::vector<double> Hidden(std::span<const double> x) const;

 private:
  int input_dim_;
  int hidden_dim_;
  int num_classes_;
  std::vector<double> params_;
};

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  int num_classes = 0;

  size_t size() const { return x.size(); }
  Dataset Subset(std::span<const size_t> indices) const;
};

// (1 - alpha) * onehot(label) + alpha / C.
std::vector<double> SmoothTargets(int label, int num_classes, double alpha);

struct MixedSample {
  std::vector<double> x;
  std::vector<double> y;
};

// Convex combination lambda * (x1, y1) + (1 - lambda) * (x2, y2).
MixedSample Mixup(std::span<const double> x1, std::span<const double> y1,
                  std::span<const double> x2, std::span<const double> y2,
                  double lambda);

struct Gradients {
  double loss = 0.0;                        // mean cross-entropy over the batch
  std::vector<double> params;               // same layout as params()
  std::vector<std::vector<double>> inputs;  // per-sample d loss_i / d x_i
};

// Mean soft-target cross-entropy and its exact gradients. Each target row is a
// probability vector.
Gradients ComputeGradients(const TinyClassifier& model,
                           std::span<const std::vector<double>> xs,
                           std::span<const std::vector<double>> targets);

// Same, with targets built by SmoothTargets(label, C, alpha).
Gradients ComputeGradients(const TinyClassifier& model,
                           std::span<const std::vector<double>> xs,
                           std::span<const int> labels, double alpha);

struct TrainConfig {
  double head_lr = 0.1;
  double backbone_lr = 0.0;
  double weight_decay = 0.0;
  double label_smoothing = 0.0;
  double mixup_alpha = 0.0;
  int batch_size = 32;
  int epochs = 20;
  // Epochs at the start during which the backbone is held frozen.
  int head_warmup_epochs = 0;
  // Draw mini-batches with inverse-class-frequency sampling weights.
  bool rebalance = false;
  uint64_t seed = 42;

  bool operator==(const TrainConfig&) const = default;
};

void ValidateTrainConfig(const TrainConfig& config);
nlohmann::json TrainConfigToJson(const TrainConfig& config);

struct EpochStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  TinyClassifier model;
  std::vector<EpochStats> trace;
};

// Mini-batch SGD with per-group learning rates and decoupled weight decay
// (applied to weight matrices, not biases).
TrainResult Train(const TinyClassifier& initial, const Dataset& data,
                  const TrainConfig& config);

double Accuracy(const TinyClassifier& model, const Dataset& data);
double MeanLoss(const TinyClassifier& model, const Dataset& data, double alpha);

}  // namespace freshkit

#endif  // FRESHKIT_TINY_MODEL_H_
