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

#include "freshkit/pseudomask.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freshkit/error.h"
#include "freshkit/max_flow.h"
#include "freshkit/rng.h"

namespace freshkit {
namespace {

constexpr double kBoxFractionLow = 0.81;
constexpr double kBoxFractionHigh = 0.99;

int BoxSide(int side, double fraction) {
  const int len = static_cast<int>(std::floor(fraction * side));
  return std::clamp(len, 2, side - 2);
}

double SquaredDistance(const Lab& a, const Lab& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

void CheckLab(const std::vector<Lab>& lab, int width, int height) {
  if (width <= 0 || height <= 0 ||
      lab.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    throw Error(ErrorCode::kDimensionMismatch, "pixel buffer does not match image size");
  }
}

BinaryMask BoxMask(int width, int height, const Rect& box) {
  BinaryMask mask(width, height, false);
  for (int y = box.y; y < box.y + box.height; ++y) {
    for (int x = box.x; x < box.x + box.width; ++x) mask.set(x, y, true);
  }
  return mask;
}

}  // namespace

Rect InitBox(int width, int height, uint64_t seed) {
  if (width < kMinImageSide || height < kMinImageSide) {
    throw Error(ErrorCode::kImageTooSmall, "image must be at least 8x8");
  }
  Rng rng = MakeRng(seed);
  const double span = kBoxFractionHigh - kBoxFractionLow;
  const double fx = kBoxFractionLow + span * UniformUnit(rng);
  const double fy = kBoxFractionLow + span * UniformUnit(rng);
  Rect box;
  box.width = BoxSide(width, fx);
  box.height = BoxSide(height, fy);
  box.x = (width - box.width) / 2;
  box.y = (height - box.height) / 2;
  return box;
}

double CutEnergy(const CutProblem& problem, const std::vector<bool>& labels) {
  const size_t n = problem.cost_fg.size();
  if (problem.cost_bg.size() != n || labels.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "labeling does not match the problem");
  }
  double energy = 0.0;
  for (size_t i = 0; i < n; ++i) energy += labels[i] ? problem.cost_fg[i] : problem.cost_bg[i];
  for (const auto& e : problem.edges) {
    if (labels[e.a] != labels[e.b]) energy += e.weight;
  }
  return energy;
}

CutSolution SolveCut(const CutProblem& problem) {
  const size_t n = problem.cost_fg.size();
  if (problem.cost_bg.size() != n ||
      (!problem.locked_bg.empty() && problem.locked_bg.size() != n)) {
    throw Error(ErrorCode::kLengthMismatch, "cut problem arrays disagree in length");
  }
  auto locked = [&](size_t i) { return !problem.locked_bg.empty() && problem.locked_bg[i]; };

  double finite_total = 0.0;
  bool any_locked = false;
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(problem.cost_fg[i]) || !std::isfinite(problem.cost_bg[i])) {
      throw Error(ErrorCode::kInvalidArgument, "unary costs must be finite");
    }
    if (locked(i)) {
      any_locked = true;
      continue;
    }
    finite_total += std::abs(problem.cost_fg[i] - problem.cost_bg[i]);
  }
  for (const auto& e : problem.edges) {
    if (e.a < 0 || e.b < 0 || static_cast<size_t>(e.a) >= n ||
        static_cast<size_t>(e.b) >= n) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "edge weights must be finite and >= 0");
    }
    finite_total += 2.0 * e.weight;
  }
  if (n > 0 && finite_total == 0.0 && !any_locked) {
    throw Error(ErrorCode::kDegenerateGraph, "every capacity is zero");
  }
  // Stands in for an infinite t-link: larger than any finite cut.
  const double hard = 1.0 + finite_total;

  // Source side is foreground. Cutting source->i labels i background.
  MaxFlowGraph graph(static_cast<int>(n));
  for (size_t i = 0; i < n; ++i) {
    const int node = static_cast<int>(i);
    if (locked(i)) {
      graph.AddEdge(node, graph.sink(), hard);
      continue;
    }
    const double base = std::min(problem.cost_fg[i], problem.cost_bg[i]);
    const double to_source = problem.cost_bg[i] - base;
    const double to_sink = problem.cost_fg[i] - base;
    if (to_source > 0.0) graph.AddEdge(graph.source(), node, to_source);
    if (to_sink > 0.0) graph.AddEdge(node, graph.sink(), to_sink);
  }
  for (const auto& e : problem.edges) {
    if (e.weight > 0.0) graph.AddEdge(e.a, e.b, e.weight, e.weight);
  }
  graph.Solve();

  CutSolution solution;
  solution.labels.resize(n);
  for (size_t i = 0; i < n; ++i) {
    solution.labels[i] = !locked(i) && graph.OnSourceSide(static_cast<int>(i));
  }
  solution.energy = CutEnergy(problem, solution.labels);
  return solution;
}

double ContrastBeta(const std::vector<Lab>& lab, int width, int height) {
  CheckLab(lab, width, height);
  double sum = 0.0;
  size_t pairs = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const size_t i = static_cast<size_t>(y) * width + x;
      if (x + 1 < width) {
        sum += SquaredDistance(lab[i], lab[i + 1]);
        ++pairs;
      }
      if (y + 1 < height) {
        sum += SquaredDistance(lab[i], lab[i + width]);
        ++pairs;
      }
    }
  }
  if (pairs == 0 || sum == 0.0) return 0.0;
  return 1.0 / (2.0 * (sum / static_cast<double>(pairs)));
}

CutProblem BuildCutProblem(const std::vector<Lab>& lab, int width, int height,
                           const GmmModel& fg, const GmmModel& bg, double lambda,
                           const BinaryMask* locked_bg, Connectivity connectivity) {
  CheckLab(lab, width, height);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be > 0");
  }
  if (fg.size() == 0 || bg.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "both color models are required");
  }
  if (locked_bg != nullptr && (locked_bg->width() != width || locked_bg->height() != height)) {
    throw Error(ErrorCode::kDimensionMismatch, "locked mask does not match image size");
  }
  const size_t n = lab.size();
  CutProblem problem;
  problem.cost_fg.resize(n);
  problem.cost_bg.resize(n);
  for (size_t i = 0; i < n; ++i) {
    problem.cost_fg[i] = -fg.LogDensity(lab[i]);
    problem.cost_bg[i] = -bg.LogDensity(lab[i]);
  }
  if (locked_bg != nullptr) {
    problem.locked_bg.resize(n);
    for (size_t i = 0; i < n; ++i) problem.locked_bg[i] = (*locked_bg)[i];
  }

  const double beta = ContrastBeta(lab, width, height);
  auto link = [&](size_t a, size_t b, double scale) {
    const double w = scale * lambda * std::exp(-beta * SquaredDistance(lab[a], lab[b]));
    problem.edges.push_back({static_cast<int>(a), static_cast<int>(b), w});
  };
  const double diagonal = 1.0 / std::numbers::sqrt2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const size_t i = static_cast<size_t>(y) * width + x;
      if (x + 1 < width) link(i, i + 1, 1.0);
      if (y + 1 < height) link(i, i + width, 1.0);
      if (connectivity == Connectivity::kEight && y + 1 < height) {
        if (x + 1 < width) link(i, i + width + 1, diagonal);
        if (x > 0) link(i, i + width - 1, diagonal);
      }
    }
  }
  return problem;
}

BinaryMask MinCutSegment(const RgbImage& image, const GmmModel& fg, const GmmModel& bg,
                         double lambda, const BinaryMask& locked_bg,
                         Connectivity connectivity) {
  const auto lab = ImageToLab(image);
  const auto problem = BuildCutProblem(lab, image.width(), image.height(), fg, bg, lambda,
                                       &locked_bg, connectivity);
  const auto solution = SolveCut(problem);
  BinaryMask mask(image.width(), image.height(), false);
  for (size_t i = 0; i < solution.labels.size(); ++i) mask.set_index(i, solution.labels[i]);
  return mask;
}

GrabCutResult GrabCut(const RgbImage& image, uint64_t seed, const GrabCutOptions& options) {
  if (options.iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  if (options.components < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  const int width = image.width();
  const int height = image.height();
  GrabCutResult result;
  result.box = InitBox(width, height, seed);
  const BinaryMask box_mask = BoxMask(width, height, result.box);
  BinaryMask locked(width, height, false);
  for (size_t i = 0; i < locked.size(); ++i) locked.set_index(i, !box_mask[i]);

  const auto lab = ImageToLab(image);
  const size_t n = lab.size();
  std::vector<bool> labels(n);
  for (size_t i = 0; i < n; ++i) labels[i] = box_mask[i];

  auto gather = [&](bool foreground) {
    std::vector<Lab> out;
    for (size_t i = 0; i < n; ++i) {
      if (labels[i] == foreground) out.push_back(lab[i]);
    }
    return out;
  };

  GmmModel fg;
  GmmModel bg;
  for (int it = 0; it < options.iterations; ++it) {
    const auto fg_pixels = gather(true);
    const auto bg_pixels = gather(false);
    if (it == 0) {
      fg = FitGmm(fg_pixels, options.components, options.em_iterations,
                  DeriveSeed(seed, 1)).model;
      bg = FitGmm(bg_pixels, options.components, options.em_iterations,
                  DeriveSeed(seed, 2)).model;
    } else {
      // Warm starts keep the alternation monotone in energy.
      fg = RefineGmm(fg, fg_pixels, options.em_iterations).model;
      bg = RefineGmm(bg, bg_pixels, options.em_iterations).model;
    }
    const auto problem = BuildCutProblem(lab, width, height, fg, bg, options.lambda, &locked,
                                         options.connectivity);
    auto solution = SolveCut(problem);
    result.energy.push_back(solution.energy);
    labels = std::move(solution.labels);
    if (std::none_of(labels.begin(), labels.end(), [](bool b) { return b; })) {
      result.degenerate = true;
      result.mask = box_mask;
      return result;
    }
  }
  result.mask = BinaryMask(width, height, false);
  for (size_t i = 0; i < n; ++i) result.mask.set_index(i, labels[i]);
  return result;
}

RgbImage ApplyMask(const RgbImage& image, const BinaryMask& mask) {
  if (image.width() != mask.width() || image.height() != mask.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask and image sizes differ");
  }
  RgbImage out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!mask.at(x, y)) out.set(x, y, Rgb{0, 0, 0});
    }
  }
  return out;
}

PseudoMaskResult GeneratePseudoMask(const RgbImage& image, uint64_t seed,
                                    const PseudoMaskOptions& options) {
  if (options.open_radius < 0 || options.close_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "morphology radii must be >= 0");
  }
  auto grab = GrabCut(image, seed, options.grabcut);
  PseudoMaskResult result;
  result.raw = grab.mask;
  result.box = grab.box;
  result.degenerate = grab.degenerate;
  result.energy = std::move(grab.energy);
  BinaryMask mask = std::move(grab.mask);
  auto open = [&] {
    if (options.open_radius > 0) mask = MorphOpen(mask, options.open_radius);
  };
  auto close = [&] {
    if (options.close_radius > 0) mask = MorphClose(mask, options.close_radius);
  };
  if (options.close_first) {
    close();
    open();
  } else {
    open();
    close();
  }
  result.mask = std::move(mask);
  return result;
}

}  // namespace freshkit
