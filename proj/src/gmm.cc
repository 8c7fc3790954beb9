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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freshkit/error.h"
#include "freshkit/pseudomask.h"
#include "freshkit/rng.h"

namespace freshkit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Components with less total responsibility than this keep their old
// parameters and get zero weight.
constexpr double kDeadMass = 1e-10;

Eigen::Matrix3d ToMatrix(const std::array<double, 9>& a) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = a[r * 3 + c];
  }
  return m;
}

std::array<double, 9> FromMatrix(const Eigen::Matrix3d& m) {
  std::array<double, 9> a{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a[r * 3 + c] = m(r, c);
  }
  return a;
}

// Symmetrizes and lifts every eigenvalue to at least the floor.
std::array<double, 9> Regularize(const Eigen::Matrix3d& scatter) {
  const Eigen::Matrix3d sym = 0.5 * (scatter + scatter.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(sym);
  Eigen::Vector3d values = solver.eigenvalues();
  for (int i = 0; i < 3; ++i) values[i] = std::max(values[i], kCovarianceFloor);
  const Eigen::Matrix3d v = solver.eigenvectors();
  Eigen::Matrix3d out = v * values.asDiagonal() * v.transpose();
  out = 0.5 * (out + out.transpose());
  return FromMatrix(out);
}

double SquaredDistance(const Lab& a, const Lab& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

double LogSumExp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Weighted M-step. `resp` is row-major N x K.
GmmModel MaximizationStep(const std::vector<Lab>& pixels, const std::vector<double>& resp,
                          const std::vector<GaussianComponent>& previous) {
  const size_t n = pixels.size();
  const size_t k = previous.size();
  std::vector<GaussianComponent> out(k);
  for (size_t c = 0; c < k; ++c) {
    double mass = 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < n; ++i) {
      const double r = resp[i * k + c];
      if (r == 0.0) continue;
      mass += r;
      mean += r * Eigen::Vector3d(pixels[i][0], pixels[i][1], pixels[i][2]);
    }
    if (mass < kDeadMass) {
      out[c] = previous[c];
      out[c].weight = 0.0;
      continue;
    }
    mean /= mass;
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (size_t i = 0; i < n; ++i) {
      const double r = resp[i * k + c];
      if (r == 0.0) continue;
      const Eigen::Vector3d d =
          Eigen::Vector3d(pixels[i][0], pixels[i][1], pixels[i][2]) - mean;
      scatter += r * d * d.transpose();
    }
    scatter /= mass;
    out[c].weight = mass / static_cast<double>(n);
    out[c].mean = {mean[0], mean[1], mean[2]};
    out[c].covariance = Regularize(scatter);
  }
  double total = 0.0;
  for (const auto& c : out) total += c.weight;
  for (auto& c : out) c.weight /= total;
  return GmmModel(std::move(out));
}

// Fills responsibilities and returns the log-likelihood under `model`.
double ExpectationStep(const GmmModel& model, const std::vector<Lab>& pixels,
                       std::vector<double>& resp) {
  const size_t k = model.components().size();
  resp.assign(pixels.size() * k, 0.0);
  std::vector<double> terms;
  double total = 0.0;
  for (size_t i = 0; i < pixels.size(); ++i) {
    model.ComponentLogTerms(pixels[i], terms);
    const double lse = LogSumExp(terms);
    total += lse;
    for (size_t c = 0; c < k; ++c) {
      resp[i * k + c] = terms[c] == kNegInf ? 0.0 : std::exp(terms[c] - lse);
    }
  }
  return total;
}

GmmFit RunEm(GmmModel model, const std::vector<Lab>& pixels, int iterations) {
  GmmFit fit;
  std::vector<double> resp;
  double previous = ExpectationStep(model, pixels, resp);
  fit.log_likelihood.push_back(previous);
  const double n = static_cast<double>(pixels.size());
  for (int it = 0; it < iterations; ++it) {
    GmmModel next = MaximizationStep(pixels, resp, model.components());
    std::vector<double> next_resp;
    const double current = ExpectationStep(next, pixels, next_resp);
    if (current < previous) break;  // numerical noise at convergence
    model = std::move(next);
    resp = std::move(next_resp);
    fit.log_likelihood.push_back(current);
    const bool converged = (current - previous) / n < kGmmTolerancePerPixel;
    previous = current;
    if (converged) break;
  }
  fit.model = std::move(model);
  return fit;
}

}  // namespace

GmmModel::GmmModel(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  Precompute();
}

void GmmModel::Precompute() {
  inverse_.clear();
  log_norm_.clear();
  for (const auto& c : components_) {
    const Eigen::Matrix3d cov = ToMatrix(c.covariance);
    Eigen::LLT<Eigen::Matrix3d> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kInvalidArgument, "covariance is not positive definite");
    }
    const Eigen::Matrix3d l = llt.matrixL();
    double log_det = 0.0;
    for (int i = 0; i < 3; ++i) log_det += 2.0 * std::log(l(i, i));
    inverse_.push_back(FromMatrix(llt.solve(Eigen::Matrix3d::Identity())));
    log_norm_.push_back(-0.5 * (3.0 * std::log(2.0 * std::numbers::pi) + log_det));
  }
}

void GmmModel::ComponentLogTerms(const Lab& z, std::vector<double>& out) const {
  out.resize(components_.size());
  for (size_t c = 0; c < components_.size(); ++c) {
    const auto& comp = components_[c];
    if (comp.weight <= 0.0) {
      out[c] = kNegInf;
      continue;
    }
    const double d[3] = {z[0] - comp.mean[0], z[1] - comp.mean[1], z[2] - comp.mean[2]};
    const auto& inv = inverse_[c];
    double q = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) q += d[r] * inv[r * 3 + s] * d[s];
    }
    out[c] = std::log(comp.weight) + log_norm_[c] - 0.5 * q;
  }
}

double GmmModel::LogDensity(const Lab& z) const {
  std::vector<double> terms;
  ComponentLogTerms(z, terms);
  return LogSumExp(terms);
}

double TotalLogLikelihood(const GmmModel& model, const std::vector<Lab>& pixels) {
  double total = 0.0;
  std::vector<double> terms;
  for (const auto& z : pixels) {
    model.ComponentLogTerms(z, terms);
    total += LogSumExp(terms);
  }
  return total;
}

GmmFit FitGmm(const std::vector<Lab>& pixels, int k, int iterations, uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (iterations < 0) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 0");
  if (pixels.size() < static_cast<size_t>(k)) {
    throw Error(ErrorCode::kTooFewPixels, "fewer pixels than mixture components");
  }
  const size_t n = pixels.size();
  Rng rng = MakeRng(seed);

  // k-means++ seeding; stops early once every pixel coincides with a center.
  std::vector<Lab> centers;
  centers.push_back(pixels[std::uniform_int_distribution<size_t>(0, n - 1)(rng)]);
  std::vector<double> nearest(n);
  for (size_t i = 0; i < n; ++i) nearest[i] = SquaredDistance(pixels[i], centers[0]);
  while (centers.size() < static_cast<size_t>(k)) {
    double total = 0.0;
    for (double d : nearest) total += d;
    if (total <= 0.0) break;
    double target = UniformUnit(rng) * total;
    size_t pick = n - 1;
    for (size_t i = 0; i < n; ++i) {
      target -= nearest[i];
      if (target < 0.0 && nearest[i] > 0.0) {
        pick = i;
        break;
      }
    }
    if (nearest[pick] <= 0.0) {
      for (size_t i = n; i-- > 0;) {
        if (nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pixels[pick]);
    for (size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], SquaredDistance(pixels[i], centers.back()));
    }
  }

  // Hard assignment to the nearest center gives the starting parameters.
  const size_t kc = centers.size();
  std::vector<double> resp(n * kc, 0.0);
  for (size_t i = 0; i < n; ++i) {
    size_t best = 0;
    double best_d = SquaredDistance(pixels[i], centers[0]);
    for (size_t c = 1; c < kc; ++c) {
      const double d = SquaredDistance(pixels[i], centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    resp[i * kc + best] = 1.0;
  }
  std::vector<GaussianComponent> placeholder(kc);
  for (size_t c = 0; c < kc; ++c) {
    placeholder[c].mean = centers[c];
    placeholder[c].covariance = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  }
  GmmModel start = MaximizationStep(pixels, resp, placeholder);
  return RunEm(std::move(start), pixels, iterations);
}

GmmFit RefineGmm(const GmmModel& start, const std::vector<Lab>& pixels, int iterations) {
  if (start.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty starting model");
  if (pixels.empty()) throw Error(ErrorCode::kTooFewPixels, "no pixels to fit");
  if (iterations < 0) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 0");
  return RunEm(start, pixels, iterations);
}

}  // namespace freshkit
