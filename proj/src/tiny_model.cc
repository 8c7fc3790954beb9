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

#include "freshkit/tiny_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "freshkit/error.h"
#include "freshkit/rng.h"
#include "freshkit/scoring.h"

namespace freshkit {
namespace {

void CheckDim(size_t got, int expected, const char* what) {
  if (got != static_cast<size_t>(expected)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has length " + std::to_string(got) +
                    ", expected " + std::to_string(expected));
  }
}

size_t ArgMax(std::span<const double> v) {
  return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Beta(a, a) via two gamma draws.
double SampleBeta(Rng& rng, double a) {
  std::gamma_distribution<double> gamma(a, 1.0);
  const double u = gamma(rng);
  const double v = gamma(rng);
  if (u + v == 0.0) return 0.5;
  return u / (u + v);
}

}  // namespace

TinyClassifier::TinyClassifier(int input_dim, int hidden_dim, int num_classes)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), num_classes_(num_classes) {
  if (input_dim <= 0 || hidden_dim < 0 || num_classes <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "model needs D > 0, H >= 0 and C > 0");
  }
  params_.assign(b2_offset() + num_classes_, 0.0);
}

TinyClassifier TinyClassifier::Random(int input_dim, int hidden_dim,
                                      int num_classes, uint64_t seed) {
  TinyClassifier model(input_dim, hidden_dim, num_classes);
  Rng rng = MakeRng(seed);
  if (hidden_dim > 0) {
    const double s = std::sqrt(6.0 / (input_dim + hidden_dim));
    for (int h = 0; h < hidden_dim; ++h) {
      for (int d = 0; d < input_dim; ++d) model.w1(h, d) = s * (2.0 * UniformUnit(rng) - 1.0);
    }
  }
  const int k_dim = model.head_input_dim();
  const double s = std::sqrt(6.0 / (k_dim + num_classes));
  for (int c = 0; c < num_classes; ++c) {
    for (int k = 0; k < k_dim; ++k) model.w2(c, k) = s * (2.0 * UniformUnit(rng) - 1.0);
  }
  return model;
}

size_t TinyClassifier::backbone_size() const {
  return static_cast<size_t>(hidden_dim_) * input_dim_ + hidden_dim_;
}
size_t TinyClassifier::b1_offset() const {
  return static_cast<size_t>(hidden_dim_) * input_dim_;
}
size_t TinyClassifier::w2_offset() const { return backbone_size(); }
size_t TinyClassifier::b2_offset() const {
  return w2_offset() + static_cast<size_t>(num_classes_) * head_input_dim();
}

double& TinyClassifier::w1(int h, int d) {
  return params_[static_cast<size_t>(h) * input_dim_ + d];
}
double& TinyClassifier::b1(int h) { return params_[b1_offset() + h]; }
double& TinyClassifier::w2(int c, int k) {
  return params_[w2_offset() + static_cast<size_t>(c) * head_input_dim() + k];
}
double& TinyClassifier::b2(int c) { return params_[b2_offset() + c]; }

std::vector<double> TinyClassifier::Hidden(std::span<const double> x) const {
  std::vector<double> hidden(hidden_dim_);
  for (int h = 0; h < hidden_dim_; ++h) {
    double u = params_[b1_offset() + h];
    const double* row = &params_[static_cast<size_t>(h) * input_dim_];
    for (int d = 0; d < input_dim_; ++d) u += row[d] * x[d];
    hidden[h] = std::tanh(u);
  }
  return hidden;
}

std::vector<double> TinyClassifier::Forward(std::span<const double> x) const {
  CheckDim(x.size(), input_dim_, "input");
  std::vector<double> hidden;
  std::span<const double> head_in = x;
  if (hidden_dim_ > 0) {
    hidden = Hidden(x);
    head_in = hidden;
  }
  const int k_dim = head_input_dim();
  std::vector<double> logits(num_classes_);
  for (int c = 0; c < num_classes_; ++c) {
    double z = params_[b2_offset() + c];
    const double* row = &params_[w2_offset() + static_cast<size_t>(c) * k_dim];
    for (int k = 0; k < k_dim; ++k) z += row[k] * head_in[k];
    logits[c] = z;
  }
  return logits;
}

std::vector<double> TinyClassifier::InputGradient(
    std::span<const double> x, std::span<const double> upstream) const {
  CheckDim(x.size(), input_dim_, "input");
  CheckDim(upstream.size(), num_classes_, "upstream gradient");
  const int k_dim = head_input_dim();
  std::vector<double> d_head_in(k_dim, 0.0);
  for (int c = 0; c < num_classes_; ++c) {
    const double* row = &params_[w2_offset() + static_cast<size_t>(c) * k_dim];
    for (int k = 0; k < k_dim; ++k) d_head_in[k] += row[k] * upstream[c];
  }
  if (hidden_dim_ == 0) return d_head_in;

  const auto hidden = Hidden(x);
  std::vector<double> dx(input_dim_, 0.0);
  for (int h = 0; h < hidden_dim_; ++h) {
    const double du = d_head_in[h] * (1.0 - hidden[h] * hidden[h]);
    const double* row = &params_[static_cast<size_t>(h) * input_dim_];
    for (int d = 0; d < input_dim_; ++d) dx[d] += row[d] * du;
  }
  return dx;
}

int TinyClassifier::Predict(std::span<const double> x) const {
  const auto logits = Forward(x);
  return static_cast<int>(ArgMax(logits));
}

nlohmann::json TinyClassifier::ToJson() const {
  return nlohmann::json{{"input_dim", input_dim_},
                        {"hidden_dim", hidden_dim_},
                        {"num_classes", num_classes_},
                        {"activation", "tanh"},
                        {"params", params_}};
}

TinyClassifier TinyClassifier::FromJson(const nlohmann::json& json) {
  try {
    TinyClassifier model(json.at("input_dim").get<int>(),
                         json.at("hidden_dim").get<int>(),
                         json.at("num_classes").get<int>());
    const auto params = json.at("params").get<std::vector<double>>();
    if (params.size() != model.num_params()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "model has " + std::to_string(params.size()) +
                      " parameters, shape needs " +
                      std::to_string(model.num_params()));
    }
    for (double p : params) {
      if (!std::isfinite(p)) {
        throw Error(ErrorCode::kNonFiniteLogit, "model parameter is not finite");
      }
    }
    model.params_ = params;
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, std::string("bad model JSON: ") + e.what());
  }
}

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  Dataset out;
  out.num_classes = num_classes;
  out.x.reserve(indices.size());
  out.y.reserve(indices.size());
  for (size_t i : indices) {
    out.x.push_back(x.at(i));
    out.y.push_back(y.at(i));
  }
  return out;
}

std::vector<double> SmoothTargets(int label, int num_classes, double alpha) {
  if (num_classes <= 0 || label < 0 || label >= num_classes) {
    throw Error(ErrorCode::kBadLabelIndex,
                "label " + std::to_string(label) + " outside [0, " +
                    std::to_string(num_classes) + ")");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "label smoothing must be in [0, 1)");
  }
  std::vector<double> targets(num_classes, alpha / num_classes);
  targets[label] += 1.0 - alpha;
  return targets;
}

MixedSample Mixup(std::span<const double> x1, std::span<const double> y1,
                  std::span<const double> x2, std::span<const double> y2,
                  double lambda) {
  if (x1.size() != x2.size() || y1.size() != y2.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mixup operands differ in shape");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mixup lambda must be in [0, 1]");
  }
  MixedSample out{std::vector<double>(x1.size()), std::vector<double>(y1.size())};
  for (size_t i = 0; i < x1.size(); ++i) {
    out.x[i] = lambda * x1[i] + (1.0 - lambda) * x2[i];
  }
  for (size_t i = 0; i < y1.size(); ++i) {
    out.y[i] = lambda * y1[i] + (1.0 - lambda) * y2[i];
  }
  return out;
}

Gradients ComputeGradients(const TinyClassifier& model,
                           std::span<const std::vector<double>> xs,
                           std::span<const std::vector<double>> targets) {
  if (xs.empty()) throw Error(ErrorCode::kEmptyBatch, "empty batch");
  if (xs.size() != targets.size()) {
    throw Error(ErrorCode::kLengthMismatch, "inputs and targets differ in count");
  }
  const int D = model.input_dim();
  const int H = model.hidden_dim();
  const int C = model.num_classes();
  const int K = model.head_input_dim();
  const auto params = model.params();
  const double inv_n = 1.0 / static_cast<double>(xs.size());

  Gradients out;
  out.params.assign(model.num_params(), 0.0);
  out.inputs.reserve(xs.size());

  std::vector<double> hidden;
  std::vector<double> dz(C);
  std::vector<double> dk(K);
  for (size_t n = 0; n < xs.size(); ++n) {
    const auto& x = xs[n];
    CheckDim(x.size(), D, "input");
    CheckDim(targets[n].size(), C, "target");
    std::span<const double> head_in = x;
    if (H > 0) {
      hidden = model.Hidden(x);
      head_in = hidden;
    }
    const auto logits = model.Forward(x);
    const double lse = StableLogSumExp(logits);
    double loss = 0.0;
    for (int c = 0; c < C; ++c) {
      loss += targets[n][c] * (lse - logits[c]);
      dz[c] = (std::exp(logits[c] - lse) - targets[n][c]) * inv_n;
    }
    out.loss += loss * inv_n;

    // Head.
    std::fill(dk.begin(), dk.end(), 0.0);
    for (int c = 0; c < C; ++c) {
      const size_t row = model.w2_offset() + static_cast<size_t>(c) * K;
      for (int k = 0; k < K; ++k) {
        out.params[row + k] += dz[c] * head_in[k];
        dk[k] += params[row + k] * dz[c];
      }
      out.params[model.b2_offset() + c] += dz[c];
    }

    // Backbone. Input gradients are reported per sample, so undo the 1/N.
    std::vector<double> dx(D, 0.0);
    if (H == 0) {
      for (int d = 0; d < D; ++d) dx[d] = dk[d] / inv_n;
    } else {
      for (int h = 0; h < H; ++h) {
        const double du = dk[h] * (1.0 - hidden[h] * hidden[h]);
        const size_t row = static_cast<size_t>(h) * D;
        for (int d = 0; d < D; ++d) {
          out.params[row + d] += du * x[d];
          dx[d] += params[row + d] * du / inv_n;
        }
        out.params[model.b1_offset() + h] += du;
      }
    }
    out.inputs.push_back(std::move(dx));
  }
  return out;
}

Gradients ComputeGradients(const TinyClassifier& model,
                           std::span<const std::vector<double>> xs,
                           std::span<const int> labels, double alpha) {
  if (xs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "inputs and labels differ in count");
  }
  std::vector<std::vector<double>> targets;
  targets.reserve(labels.size());
  for (int label : labels) {
    targets.push_back(SmoothTargets(label, model.num_classes(), alpha));
  }
  return ComputeGradients(model, xs, targets);
}

void ValidateTrainConfig(const TrainConfig& config) {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(config.head_lr >= 0.0)) bad("head_lr must be >= 0");
  if (!(config.backbone_lr >= 0.0)) bad("backbone_lr must be >= 0");
  if (!(config.weight_decay >= 0.0)) bad("weight_decay must be >= 0");
  if (!(config.label_smoothing >= 0.0 && config.label_smoothing < 1.0)) {
    bad("label_smoothing must be in [0, 1)");
  }
  if (!(config.mixup_alpha >= 0.0)) bad("mixup_alpha must be >= 0");
  if (config.batch_size < 1) bad("batch_size must be >= 1");
  if (config.epochs < 0) bad("epochs must be >= 0");
  if (config.head_warmup_epochs < 0) bad("head_warmup_epochs must be >= 0");
}

nlohmann::json TrainConfigToJson(const TrainConfig& config) {
  return nlohmann::json{{"head_lr", config.head_lr},
                        {"backbone_lr", config.backbone_lr},
                        {"weight_decay", config.weight_decay},
                        {"label_smoothing", config.label_smoothing},
                        {"mixup_alpha", config.mixup_alpha},
                        {"batch_size", config.batch_size},
                        {"epochs", config.epochs},
                        {"head_warmup_epochs", config.head_warmup_epochs},
                        {"rebalance", config.rebalance}};
}

double Accuracy(const TinyClassifier& model, const Dataset& data) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  size_t correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (model.Predict(data.x[i]) == data.y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double MeanLoss(const TinyClassifier& model, const Dataset& data, double alpha) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  double total = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    const auto logits = model.Forward(data.x[i]);
    const auto targets = SmoothTargets(data.y[i], model.num_classes(), alpha);
    const double lse = StableLogSumExp(logits);
    for (size_t c = 0; c < logits.size(); ++c) total += targets[c] * (lse - logits[c]);
  }
  return total / static_cast<double>(data.size());
}

TrainResult Train(const TinyClassifier& initial, const Dataset& data,
                  const TrainConfig& config) {
  ValidateTrainConfig(config);
  if (data.size() == 0) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  if (data.y.size() != data.x.size()) {
    throw Error(ErrorCode::kLengthMismatch, "features and labels differ in count");
  }
  if (data.num_classes != initial.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch, "dataset and model class counts differ");
  }
  for (int label : data.y) {
    if (label < 0 || label >= data.num_classes) {
      throw Error(ErrorCode::kBadLabelIndex, "label out of range");
    }
  }

  TinyClassifier model = initial;
  Rng rng = MakeRng(config.seed);
  const size_t n = data.size();
  const int C = model.num_classes();

  std::discrete_distribution<size_t> weighted;
  if (config.rebalance) {
    std::vector<double> counts(C, 0.0);
    for (int label : data.y) counts[label] += 1.0;
    std::vector<double> weights(n);
    for (size_t i = 0; i < n; ++i) weights[i] = 1.0 / counts[data.y[i]];
    weighted = std::discrete_distribution<size_t>(weights.begin(), weights.end());
  }

  const size_t backbone_end = model.backbone_size();
  const size_t b1_begin = model.b1_offset();
  const size_t b2_begin = model.b2_offset();
  auto is_weight = [&](size_t p) {
    return p < b1_begin || (p >= backbone_end && p < b2_begin);
  };

  TrainResult result{model, {}};
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.rebalance) {
      for (auto& index : order) index = weighted(rng);
    } else {
      std::shuffle(order.begin(), order.end(), rng);
    }
    const bool backbone_frozen =
        epoch < config.head_warmup_epochs || config.backbone_lr == 0.0;

    for (size_t start = 0; start < n; start += config.batch_size) {
      const size_t end = std::min(n, start + static_cast<size_t>(config.batch_size));
      std::vector<std::vector<double>> xs;
      std::vector<std::vector<double>> ys;
      for (size_t i = start; i < end; ++i) {
        xs.push_back(data.x[order[i]]);
        ys.push_back(SmoothTargets(data.y[order[i]], C, config.label_smoothing));
      }
      if (config.mixup_alpha > 0.0) {
        const double lambda = SampleBeta(rng, config.mixup_alpha);
        std::vector<size_t> partner(xs.size());
        std::iota(partner.begin(), partner.end(), 0);
        std::shuffle(partner.begin(), partner.end(), rng);
        std::vector<std::vector<double>> mixed_x(xs.size());
        std::vector<std::vector<double>> mixed_y(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
          auto mixed = Mixup(xs[i], ys[i], xs[partner[i]], ys[partner[i]], lambda);
          mixed_x[i] = std::move(mixed.x);
          mixed_y[i] = std::move(mixed.y);
        }
        xs = std::move(mixed_x);
        ys = std::move(mixed_y);
      }

      const auto grads = ComputeGradients(model, xs, ys);
      auto params = model.mutable_params();
      for (size_t p = 0; p < params.size(); ++p) {
        const bool in_backbone = p < backbone_end;
        if (in_backbone && backbone_frozen) continue;
        const double lr = in_backbone ? config.backbone_lr : config.head_lr;
        if (lr == 0.0) continue;
        double value = params[p] - lr * grads.params[p];
        if (config.weight_decay > 0.0 && is_weight(p)) {
          value -= lr * config.weight_decay * params[p];
        }
        params[p] = value;
      }
    }
    result.trace.push_back(
        {MeanLoss(model, data, config.label_smoothing), Accuracy(model, data)});
  }
  result.model = std::move(model);
  return result;
}

}  // namespace freshkit
