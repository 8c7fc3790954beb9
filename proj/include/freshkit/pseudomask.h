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

// GrabCut-style pseudo-mask generation in automatic rectangle mode.
//
// Energy of a labeling a (true = foreground):
//   E(a) = sum_i D_{a_i}(z_i) + sum_{(i,j)} w_ij [a_i != a_j]
// with D_fg = -log p_fg(z), D_bg = -log p_bg(z) from Lab-space GMMs and
// w_ij = lambda * exp(-beta * |z_i - z_j|^2). Pixels outside the box are
// locked to background.

#ifndef FRESHKIT_PSEUDOMASK_H_
#define FRESHKIT_PSEUDOMASK_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "freshkit/data_model.h"

namespace freshkit {

using Lab = std::array<double, 3>;

// sRGB (8-bit, gamma-encoded) -> CIELAB under D65.
Lab RgbToLab(Rgb pixel);
std::vector<Lab> ImageToLab(const RgbImage& image);

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool Contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  bool operator==(const Rect&) const = default;
};

inline constexpr int kMinImageSide = 8;

// Centered box whose side fractions are drawn from U[0.81, 0.99].
Rect InitBox(int width, int height, uint64_t seed);

inline constexpr double kCovarianceFloor = 1e-6;

struct GaussianComponent {
  double weight = 0.0;
  Lab mean{};
  std::array<double, 9> covariance{};  // row-major, symmetric
};

class GmmModel {
 public:
  GmmModel() = default;
  explicit GmmModel(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const { return components_; }
  int size() const { return static_cast<int>(components_.size()); }

  // log p(z) under the mixture.
  double LogDensity(const Lab& z) const;
  // Per-component log(w_k) + log N(z; mu_k, Sigma_k); -inf for zero weight.
  void ComponentLogTerms(const Lab& z, std::vector<double>& out) const;

 private:
  void Precompute();

  std::vector<GaussianComponent> components_;
  std::vector<std::array<double, 9>> inverse_;
  std::vector<double> log_norm_;
};

struct GmmFit {
  GmmModel model;
  // Total log-likelihood after initialization and after each EM step.
  std::vector<double> log_likelihood;
};

inline constexpr int kDefaultGmmIterations = 10;
inline constexpr double kGmmTolerancePerPixel = 1e-6;

// k-means++ seeded initialization followed by EM.
GmmFit FitGmm(const std::vector<Lab>& pixels, int k,
              int iterations = kDefaultGmmIterations, uint64_t seed = 42);
// EM warm-started from `start` (same component count).
GmmFit RefineGmm(const GmmModel& start, const std::vector<Lab>& pixels,
                 int iterations = kDefaultGmmIterations);

double TotalLogLikelihood(const GmmModel& model, const std::vector<Lab>& pixels);

// Generic binary labeling problem solved exactly by a single min-cut.
struct CutEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

struct CutProblem {
  std::vector<double> cost_fg;  // unary cost of labeling node foreground
  std::vector<double> cost_bg;
  std::vector<CutEdge> edges;   // paid when endpoints disagree
  std::vector<bool> locked_bg;  // empty, or one flag per node
};

double CutEnergy(const CutProblem& problem, const std::vector<bool>& labels);

struct CutSolution {
  std::vector<bool> labels;
  double energy = 0.0;
};

CutSolution SolveCut(const CutProblem& problem);

enum class Connectivity { kFour, kEight };

// Contrast parameter over 4-neighbor pairs; 0 when all pairs are equal.
double ContrastBeta(const std::vector<Lab>& lab, int width, int height);

CutProblem BuildCutProblem(const std::vector<Lab>& lab, int width, int height,
                           const GmmModel& fg, const GmmModel& bg, double lambda,
                           const BinaryMask* locked_bg,
                           Connectivity connectivity = Connectivity::kFour);

// One exact graph-cut step; locked pixels always come out background.
BinaryMask MinCutSegment(const RgbImage& image, const GmmModel& fg,
                         const GmmModel& bg, double lambda,
                         const BinaryMask& locked_bg,
                         Connectivity connectivity = Connectivity::kFour);

struct GrabCutOptions {
  int iterations = 5;
  int components = 5;
  double lambda = 50.0;
  int em_iterations = kDefaultGmmIterations;
  Connectivity connectivity = Connectivity::kFour;
};

struct GrabCutResult {
  BinaryMask mask;
  Rect box;
  bool degenerate = false;
  // Energy after each graph cut, under the models used for that cut.
  std::vector<double> energy;
};

GrabCutResult GrabCut(const RgbImage& image, uint64_t seed,
                      const GrabCutOptions& options = {});

// Square structuring element of side 2r+1. Dilation treats pixels outside
// the image as background; erosion ignores them.
BinaryMask Erode(const BinaryMask& mask, int radius = 1);
BinaryMask Dilate(const BinaryMask& mask, int radius = 1);
BinaryMask MorphOpen(const BinaryMask& mask, int radius = 1);
BinaryMask MorphClose(const BinaryMask& mask, int radius = 1);

// Zeroes pixels outside the mask.
RgbImage ApplyMask(const RgbImage& image, const BinaryMask& mask);

struct PseudoMaskOptions {
  GrabCutOptions grabcut;
  int open_radius = 1;   // 0 disables
  int close_radius = 1;  // 0 disables
  bool close_first = false;
};

struct PseudoMaskResult {
  BinaryMask raw;
  BinaryMask mask;
  Rect box;
  bool degenerate = false;
  std::vector<double> energy;
};

PseudoMaskResult GeneratePseudoMask(const RgbImage& image, uint64_t seed,
                                    const PseudoMaskOptions& options = {});

}  // namespace freshkit

#endif  // FRESHKIT_PSEUDOMASK_H_
