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

// Python bindings for the freshkit core. Images cross the boundary as uint8
// arrays of shape (H, W, 3) and masks as bool arrays of shape (H, W).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "freshkit/cli.h"
#include "freshkit/cls_eval.h"
#include "freshkit/demo.h"
#include "freshkit/error.h"
#include "freshkit/hygiene.h"
#include "freshkit/ood_eval.h"
#include "freshkit/pseudomask.h"
#include "freshkit/scoring.h"
#include "freshkit/seg_eval.h"
#include "freshkit/stats.h"

namespace py = pybind11;

namespace freshkit {
namespace {

using ImageArray = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;
using MaskArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

RgbImage ToImage(const ImageArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw Error(ErrorCode::kDimensionMismatch, "image must have shape (H, W, 3)");
  }
  RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), img.mutable_bytes().begin());
  return img;
}

BinaryMask ToMask(const MaskArray& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kDimensionMismatch, "mask must have shape (H, W)");
  BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.size(); ++i) m.set_index(static_cast<size_t>(i), a.data()[i]);
  return m;
}

MaskArray FromMask(const BinaryMask& m) {
  MaskArray out({m.height(), m.width()});
  auto* dst = out.mutable_data();
  for (size_t i = 0; i < m.size(); ++i) dst[i] = m[i];
  return out;
}

ImageArray FromImage(const RgbImage& img) {
  ImageArray out({img.height(), img.width(), 3});
  std::copy(img.bytes().begin(), img.bytes().end(), out.mutable_data());
  return out;
}

py::dict OodDict(const OodReport& r) {
  py::dict d;
  d["auroc"] = r.auroc;
  d["aupr_in"] = r.aupr_in;
  d["fpr_at_95tpr"] = r.fpr_at_95tpr;
  return d;
}

py::dict RectDict(const Rect& r) {
  py::dict d;
  d["x"] = r.x;
  d["y"] = r.y;
  d["width"] = r.width;
  d["height"] = r.height;
  return d;
}

std::unique_ptr<bool[]> Bools(const std::vector<bool>& v) {
  auto out = std::make_unique<bool[]>(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

}  // namespace
}  // namespace freshkit

PYBIND11_MODULE(_core, m) {
  using namespace freshkit;
  m.doc() = "Evaluation toolkit for freshness classification with abstention";

  // Messages start with the error code name, e.g. "EmptyInput: ...".
  py::register_exception<Error>(m, "FreshkitError", PyExc_ValueError);

  // Scoring.
  m.def("softmax", [](const std::vector<double>& z, double t) { return Softmax(z, t); },
        py::arg("logits"), py::arg("temperature") = 1.0);
  m.def("logsumexp", [](const std::vector<double>& z) { return StableLogSumExp(z); });
  m.def("msp_score", [](const std::vector<double>& z) { return MspScore(z); });
  m.def("energy_score", [](const std::vector<double>& z, double t) { return EnergyScore(z, t); },
        py::arg("logits"), py::arg("temperature") = 1.0);

  // Detector metrics.
  m.def("auroc", [](const std::vector<double>& id, const std::vector<double>& ood) {
    return Auroc(id, ood);
  });
  m.def("ood_metrics", [](const std::vector<double>& id, const std::vector<double>& ood) {
    std::vector<ScoredSample> s;
    for (double v : id) s.push_back({"", v, true});
    for (double v : ood) s.push_back({"", v, false});
    return OodDict(OodMetrics(s));
  }, py::arg("id_scores"), py::arg("ood_scores"));
  m.def("threshold_sweep",
        [](const std::vector<double>& conf, std::vector<double> taus) {
          if (taus.empty()) taus.assign(std::begin(kDefaultTaus), std::end(kDefaultTaus));
          py::list out;
          for (const auto& p : ThresholdSweep(conf, taus)) {
            py::dict d;
            d["tau"] = p.tau;
            d["coverage"] = p.coverage;
            d["rejection"] = p.rejection;
            out.append(d);
          }
          return out;
        },
        py::arg("confidences"), py::arg("taus") = std::vector<double>{});
  m.attr("DEFAULT_TAUS") = std::vector<double>(std::begin(kDefaultTaus), std::end(kDefaultTaus));

  // Classification metrics.
  m.def("cross_entropy",
        [](const std::vector<std::vector<double>>& probs, const std::vector<int>& labels,
           double alpha) { return CrossEntropy(probs, labels, alpha); },
        py::arg("probs"), py::arg("labels"), py::arg("alpha") = 0.0);
  m.def("confusion", [](const std::vector<int>& t, const std::vector<int>& p, int c) {
    const auto cm = Confusion(t, p, c);
    std::vector<std::vector<int64_t>> rows(c, std::vector<int64_t>(c));
    for (int i = 0; i < c; ++i) {
      for (int j = 0; j < c; ++j) rows[i][j] = cm.at(i, j);
    }
    return rows;
  }, py::arg("true_labels"), py::arg("predicted"), py::arg("num_classes"));
  m.def("prf", [](const std::vector<int>& t, const std::vector<int>& p, int c) {
    const auto r = PrfFromConfusion(Confusion(t, p, c));
    py::list per_class;
    for (const auto& k : r.per_class) {
      py::dict d;
      d["precision"] = k.precision;
      d["recall"] = k.recall;
      d["f1"] = k.f1;
      d["support"] = k.support;
      per_class.append(d);
    }
    py::dict d;
    d["per_class"] = per_class;
    d["macro_precision"] = r.macro_precision;
    d["macro_recall"] = r.macro_recall;
    d["macro_f1"] = r.macro_f1;
    d["accuracy"] = r.accuracy;
    return d;
  }, py::arg("true_labels"), py::arg("predicted"), py::arg("num_classes"));

  // Mask metrics.
  m.def("mask_metrics", [](const MaskArray& pred, const MaskArray& gt) {
    const auto r = ComputeMaskMetrics(ToMask(pred), ToMask(gt));
    py::dict d;
    for (int i = 0; i < MaskMetrics::kCount; ++i) d[py::str(std::string(MaskMetricName(i)))] = r.get(i);
    return d;
  });

  // Paired comparison and bootstrap.
  m.def("mcnemar", [](int64_t n11, int64_t n10, int64_t n01, int64_t n00) {
    const PairedOutcome po{n11, n10, n01, n00};
    const auto t = McNemar(po);
    const auto ci = PairedAccuracyDiffCi(po);
    py::dict d;
    d["chi2"] = t.chi2;
    d["p"] = t.p;
    d["degenerate"] = t.degenerate;
    d["delta"] = ci.delta;
    d["ci"] = py::make_tuple(ci.lo, ci.hi);
    return d;
  }, py::arg("n11"), py::arg("n10"), py::arg("n01"), py::arg("n00"));
  m.def("paired_outcomes", [](const std::vector<bool>& a, const std::vector<bool>& b) {
    const auto pa = Bools(a);
    const auto pb = Bools(b);
    const auto po = TabulatePaired(std::span<const bool>(pa.get(), a.size()),
                                   std::span<const bool>(pb.get(), b.size()));
    return py::make_tuple(po.n11, po.n10, po.n01, po.n00);
  });
  m.def("chi2_sf_df1", &Chi2SurvivalDf1);
  m.def("bootstrap_mean",
        [](const std::vector<double>& v, int replicates, uint64_t seed, double level) {
          const auto r = PercentileBootstrap<double>(
              v, [](std::span<const double> s) { return Mean(s); }, replicates, seed, level);
          return py::make_tuple(r.estimate, r.lo, r.hi);
        },
        py::arg("values"), py::arg("replicates") = kDefaultF1BootstrapReplicates,
        py::arg("seed") = 42, py::arg("level") = 0.95);

  // Hygiene.
  m.def("phash64", [](const ImageArray& img) { return PHash64(ToImage(img)); });
  m.def("hamming", &Hamming);
  m.def("cluster_near_duplicates",
        [](const std::vector<std::pair<std::string, uint64_t>>& entries, int max_dist) {
          std::vector<HashEntry> e;
          for (const auto& [id, h] : entries) e.push_back({id, h});
          const auto r = ClusterNearDuplicates(e, max_dist);
          py::dict d;
          d["clusters"] = r.clusters;
          d["representatives"] = r.representatives;
          d["removed"] = r.removed;
          return d;
        },
        py::arg("entries"), py::arg("max_dist") = kDefaultMaxHashDistance);
  m.def("stratified_split",
        [](const std::vector<int>& labels, int num_classes, std::array<double, 3> ratios,
           uint64_t seed) {
          const auto s = StratifiedSplit(labels, num_classes, ratios, seed);
          std::vector<int> parts;
          for (auto p : s.part) parts.push_back(static_cast<int>(p));
          return py::make_tuple(parts, s.counts);
        },
        py::arg("labels"), py::arg("num_classes"),
        py::arg("ratios") = std::array<double, 3>{0.70, 0.15, 0.15}, py::arg("seed") = 42);
  m.def("class_weights", [](const std::vector<int>& labels, int c) { return ClassWeights(labels, c); });

  // Pseudo-masks.
  m.def("rgb_to_lab", [](uint8_t r, uint8_t g, uint8_t b) { return RgbToLab({r, g, b}); });
  m.def("grabcut",
        [](const ImageArray& img, uint64_t seed, int iterations, int components, double lambda) {
          GrabCutOptions o;
          o.iterations = iterations;
          o.components = components;
          o.lambda = lambda;
          const auto r = GrabCut(ToImage(img), seed, o);
          py::dict d;
          d["mask"] = FromMask(r.mask);
          d["box"] = RectDict(r.box);
          d["degenerate"] = r.degenerate;
          d["energy"] = r.energy;
          return d;
        },
        py::arg("image"), py::arg("seed") = 42, py::arg("iterations") = 5,
        py::arg("components") = 5, py::arg("lambda_") = 50.0);
  m.def("pseudomask",
        [](const ImageArray& img, uint64_t seed, int open_radius, int close_radius) {
          PseudoMaskOptions o;
          o.open_radius = open_radius;
          o.close_radius = close_radius;
          return FromMask(GeneratePseudoMask(ToImage(img), seed, o).mask);
        },
        py::arg("image"), py::arg("seed") = 42, py::arg("open_radius") = 1,
        py::arg("close_radius") = 1);
  m.def("apply_mask", [](const ImageArray& img, const MaskArray& mask) {
    return FromImage(ApplyMask(ToImage(img), ToMask(mask)));
  });

  // End to end.
  m.def("demo_json", [](uint64_t seed) { return DumpReport(RunDemo(seed).report); },
        py::arg("seed") = 42);
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"freshkit"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
