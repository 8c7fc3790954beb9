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

#include "freshkit/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "freshkit/cls_eval.h"
#include "freshkit/demo.h"
#include "freshkit/error.h"
#include "freshkit/hygiene.h"
#include "freshkit/io.h"
#include "freshkit/nested_cv.h"
#include "freshkit/ood_eval.h"
#include "freshkit/pseudomask.h"
#include "freshkit/report.h"
#include "freshkit/rng.h"
#include "freshkit/scoring.h"
#include "freshkit/seg_eval.h"
#include "freshkit/stats.h"
#include "freshkit/tiny_model.h"

namespace freshkit {
namespace {

namespace fs = std::filesystem;

constexpr char kLogitFormat[] =
    "Logit CSV: header 'id,split,label,logit_0,...,logit_{C-1}'; split is one of "
    "train|val|test|ood; label is a class index or empty (always empty for ood).";
constexpr char kScoreFormat[] =
    "Scores CSV: header 'id,score' or 'id,score,is_id' with is_id in {0,1}; "
    "larger scores mean more in-distribution.";
constexpr char kLabelFormat[] = "Labels CSV: header 'id,label' with integer class indices.";
constexpr char kFeatureFormat[] =
    "Features CSV: header 'id,label,f_0,...,f_{D-1}'; label may be empty.";
constexpr char kModelFormat[] =
    "Model JSON: {input_dim, hidden_dim, num_classes, activation, params} as written "
    "by the library.";

struct Globals {
  uint64_t seed = 42;
  std::string out;
};

void AddGlobals(CLI::App* app, Globals& g, bool with_out = true) {
  app->add_option("--seed", g.seed, "Random seed (default 42)");
  if (with_out) app->add_option("--out", g.out, "Write the JSON report here instead of stdout");
}

void Emit(const Json& report, const std::string& path, std::ostream& out) {
  const std::string text = DumpReport(report);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

std::vector<fs::path> ListFiles(const std::string& dir, std::set<std::string> extensions) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoError, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && extensions.count(entry.path().extension().string())) {
      files.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir);
  std::sort(files.begin(), files.end());
  return files;
}

int Argmax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<LogitRecord> LabeledRecords(const std::string& path) {
  std::vector<LogitRecord> out;
  for (auto& r : ReadLogitCsv(path)) {
    if (r.label) out.push_back(std::move(r));
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyInput, "no labeled rows in " + path);
  return out;
}

std::vector<std::string> ResolveClassNames(const std::vector<std::string>& given, int count) {
  if (given.empty()) {
    return count == ClassSpace().size() ? ClassSpace().names()
                                        : ClassSpace::Generic(count).names();
  }
  if (static_cast<int>(given.size()) != count) {
    throw Error(ErrorCode::kInvalidArgument, "--class-names must list every class");
  }
  return ClassSpace(given).names();
}

// Stable per-name stream so adding files does not change other images' seeds.
uint64_t NameStream(const std::string& name) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int InferClassCount(std::span<const int> labels, int given) {
  if (given > 0) return given;
  int top = -1;
  for (int l : labels) top = std::max(top, l);
  if (top < 0) throw Error(ErrorCode::kEmptyInput, "no labels");
  return top + 1;
}

// --- subcommands -----------------------------------------------------------

struct ScoreArgs {
  std::string logits, method = "msp", features, model, scores_out;
  std::optional<double> temperature;
  double epsilon = 0.0;
};

Json RunScore(const ScoreArgs& a, uint64_t seed) {
  const ScoreMethod method = ParseScoreMethod(a.method);
  Json report = NewReport("score", seed);
  report["method"] = std::string(ScoreMethodName(method));
  std::vector<ScoreRow> rows;
  Json scores = Json::array();
  if (method == ScoreMethod::kOdin) {
    if (a.features.empty() || a.model.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "odin needs --features and --model");
    }
    std::ifstream model_file(a.model);
    if (!model_file) throw Error(ErrorCode::kIoError, "cannot open " + a.model);
    nlohmann::json model_json;
    try {
      model_json = nlohmann::json::parse(model_file);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedHeader, std::string("bad model JSON: ") + e.what());
    }
    const auto model = TinyClassifier::FromJson(model_json);
    const OdinConfig config{a.temperature.value_or(OdinConfig{}.temperature), a.epsilon};
    const auto features = ReadFeaturesCsv(a.features);
    if (features.empty()) throw Error(ErrorCode::kEmptyInput, "no feature rows");
    report["temperature"] = config.temperature;
    report["epsilon"] = config.epsilon;
    for (const auto& f : features) {
      const double s = OdinScore(model, f.features, config);
      rows.push_back({f.id, s, std::nullopt});
      scores.push_back(Json{{"id", f.id}, {"score", RoundFixed(s)}});
    }
  } else {
    if (a.logits.empty()) throw Error(ErrorCode::kInvalidArgument, "--logits is required");
    const double t = a.temperature.value_or(1.0);
    const auto records = ReadLogitCsv(a.logits);
    if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no logit rows in " + a.logits);
    report["temperature"] = t;
    for (const auto& r : records) {
      Json entry{{"id", r.id}, {"split", std::string(SplitName(r.split))}};
      double s = 0.0;
      if (method == ScoreMethod::kMsp) {
        s = ScaledMspScore(r.logits, t);
      } else {
        const double e = EnergyScore(r.logits, t);
        entry["energy"] = RoundFixed(e);
        s = -e;
      }
      entry["score"] = RoundFixed(s);
      scores.push_back(std::move(entry));
      rows.push_back({r.id, s, r.split != Split::kOod});
    }
  }
  report["n"] = rows.size();
  report["scores"] = std::move(scores);
  if (!a.scores_out.empty()) WriteScoresCsv(a.scores_out, rows);
  return report;
}

struct DetectorArgs {
  std::string scores, logits, method = "msp";
  double temperature = 1.0;
};

// ID and OOD detector scores from either input form.
std::pair<std::vector<double>, std::vector<double>> LoadDetectorScores(const DetectorArgs& a,
                                                                       std::string& source) {
  std::vector<double> id, ood;
  if (!a.scores.empty() == !a.logits.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --scores or --logits");
  }
  if (!a.scores.empty()) {
    source = "scores";
    const auto rows = ReadScoresCsv(a.scores);
    if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no score rows");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_id) {
        throw Error(ErrorCode::kMalformedHeader, "scores CSV needs an is_id column");
      }
      (*rows[i].is_id ? id : ood).push_back(rows[i].score);
    }
  } else {
    const ScoreMethod method = ParseScoreMethod(a.method);
    if (method == ScoreMethod::kOdin) {
      throw Error(ErrorCode::kInvalidArgument,
                  "odin needs a model; run `score --method odin --scores-out` first");
    }
    source = std::string(ScoreMethodName(method));
    const auto records = ReadLogitCsv(a.logits);
    if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no logit rows");
    for (const auto& r : records) {
      const double s = method == ScoreMethod::kMsp ? ScaledMspScore(r.logits, a.temperature)
                                                   : -EnergyScore(r.logits, a.temperature);
      (r.split == Split::kOod ? ood : id).push_back(s);
    }
  }
  return {id, ood};
}

Json RunOodEval(const DetectorArgs& a, uint64_t seed) {
  std::string source;
  const auto [id, ood] = LoadDetectorScores(a, source);
  std::vector<ScoredSample> samples;
  for (double s : id) samples.push_back({"", s, true});
  for (double s : ood) samples.push_back({"", s, false});
  Json report = NewReport("ood-eval", seed);
  report["source"] = source;
  report["n_id"] = id.size();
  report["n_ood"] = ood.size();
  report["metrics"] = OodReportJson(OodMetrics(samples));
  return report;
}

struct SweepArgs {
  std::string scores, logits;
  double temperature = 1.0;
  std::vector<double> taus;
  bool raw = false;
};

Json RunSweep(const SweepArgs& a, uint64_t seed) {
  if (!a.scores.empty() == !a.logits.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --scores or --logits");
  }
  std::vector<double> values;
  if (!a.scores.empty()) {
    for (const auto& r : ReadScoresCsv(a.scores)) values.push_back(r.score);
  } else {
    for (const auto& r : ReadLogitCsv(a.logits)) {
      values.push_back(ScaledMspScore(r.logits, a.temperature));
    }
  }
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to sweep");
  std::vector<double> taus = a.taus;
  const bool defaults = taus.empty();
  if (defaults) taus.assign(std::begin(kDefaultTaus), std::end(kDefaultTaus));
  const auto points = a.raw ? ScoreThresholdSweep(values, taus) : ThresholdSweep(values, taus);
  Json report = NewReport("sweep", seed);
  report["n"] = values.size();
  report["default_taus"] = defaults;
  report["reference_tau"] = kReferenceTau;
  report["points"] = SweepJson(points);
  return report;
}

struct ClsArgs {
  std::string logits;
  std::vector<std::string> class_names;
  std::optional<double> tau;
  double alpha = 0.0;
  int replicates = kDefaultF1BootstrapReplicates;
};

Json RunClsEval(const ClsArgs& a, uint64_t seed) {
  const auto records = LabeledRecords(a.logits);
  const int c = static_cast<int>(records.front().logits.size());
  const auto names = ResolveClassNames(a.class_names, c);
  const size_t n = records.size();
  std::vector<int> truth, pred;
  std::vector<std::vector<double>> probs;
  auto kept = std::make_unique<bool[]>(n);
  size_t kept_count = 0;
  for (size_t i = 0; i < n; ++i) {
    truth.push_back(*records[i].label);
    pred.push_back(Argmax(records[i].logits));
    probs.push_back(Softmax(records[i].logits));
    kept[i] = !a.tau || MspScore(records[i].logits) >= *a.tau;
    kept_count += kept[i];
  }
  const std::span<const bool> kept_span(kept.get(), n);
  const auto cm = a.tau ? Confusion(truth, pred, c, kept_span) : Confusion(truth, pred, c);
  const auto prf = PrfFromConfusion(cm);

  // Image-level resampling; the same resamples serve every class.
  auto f1_over = [&](std::span<const size_t> idx, int cls) {
    int64_t tp = 0, fp = 0, fn = 0;
    for (size_t i : idx) {
      if (!kept[i]) continue;
      const bool t = truth[i] == cls, p = pred[i] == cls;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    return tp == 0 ? 0.0 : 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
  };
  Json metrics = PrfJson(prf, names);
  for (int cls = 0; cls < c; ++cls) {
    const auto ci = PercentileBootstrapIndexed(
        n, [&](std::span<const size_t> idx) { return f1_over(idx, cls); }, a.replicates, seed);
    metrics["per_class"][cls]["f1_ci"] = Json::array({RoundFixed(ci.lo), RoundFixed(ci.hi)});
  }
  const auto macro = PercentileBootstrapIndexed(
      n,
      [&](std::span<const size_t> idx) {
        double sum = 0.0;
        for (int cls = 0; cls < c; ++cls) sum += f1_over(idx, cls) / c;
        return sum;
      },
      a.replicates, seed);
  metrics["macro_f1_ci"] = Json::array({RoundFixed(macro.lo), RoundFixed(macro.hi)});

  Json report = NewReport("cls-eval", seed);
  report["classes"] = names;
  report["n"] = n;
  report["kept"] = kept_count;
  if (a.tau) report["tau"] = *a.tau;
  report["bootstrap_replicates"] = a.replicates;
  report["cross_entropy"] = RoundFixed(CrossEntropy(probs, truth, a.alpha));
  report["label_smoothing"] = a.alpha;
  report["metrics"] = std::move(metrics);
  report["confusion"] = ConfusionJson(cm);
  return report;
}

struct SegArgs {
  std::string pred, gt, classes;
  std::vector<std::string> class_names;
  int replicates = kDefaultSegBootstrapReplicates;
};

Json RunSegEval(const SegArgs& a, uint64_t seed) {
  const auto gt_files = ListFiles(a.gt, {".pgm"});
  if (gt_files.empty()) throw Error(ErrorCode::kEmptyInput, "no .pgm masks in " + a.gt);
  std::map<std::string, int> class_of;
  if (!a.classes.empty()) {
    for (const auto& row : ReadLabelsCsv(a.classes)) class_of[row.id] = row.label;
  }
  std::vector<MaskMetrics> all;
  std::map<int, std::vector<MaskMetrics>> by_class;
  for (const auto& g : gt_files) {
    const fs::path p = fs::path(a.pred) / g.filename();
    if (!fs::exists(p)) throw Error(ErrorCode::kIoError, "missing prediction " + p.string());
    const auto m = ComputeMaskMetrics(ReadPgm(p), ReadPgm(g));
    all.push_back(m);
    if (!a.classes.empty()) {
      const auto it = class_of.find(g.stem().string());
      if (it == class_of.end()) {
        throw Error(ErrorCode::kMalformedRow, "no class for " + g.stem().string());
      }
      by_class[it->second].push_back(m);
    }
  }
  Json report = NewReport("seg-eval", seed);
  report["n_images"] = all.size();
  report["bootstrap_replicates"] = a.replicates;
  report["global"] = MaskSummaryJson(SummarizeMaskMetrics(all, a.replicates, seed));
  if (!by_class.empty()) {
    const auto& names = a.class_names;
    Json per_class = Json::array();
    for (const auto& [cls, items] : by_class) {
      if (cls < 0) throw Error(ErrorCode::kBadLabelIndex, "negative class index");
      per_class.push_back(
          Json{{"class", cls < static_cast<int>(names.size()) ? names[cls]
                                                              : std::to_string(cls)},
               {"n_images", items.size()},
               {"metrics", MaskSummaryJson(SummarizeMaskMetrics(items, a.replicates, seed))}});
    }
    report["per_class"] = std::move(per_class);
  }
  return report;
}

struct McNemarArgs {
  std::optional<int64_t> n11, n10, n01, n00;
  std::string a, b;
};

Json RunMcNemar(const McNemarArgs& m, uint64_t seed) {
  const bool counts = m.n11 || m.n10 || m.n01 || m.n00;
  const bool files = !m.a.empty() || !m.b.empty();
  if (counts == files) {
    throw Error(ErrorCode::kInvalidArgument, "give either the four counts or --a and --b");
  }
  PairedOutcome outcome;
  if (counts) {
    if (!(m.n11 && m.n10 && m.n01 && m.n00)) {
      throw Error(ErrorCode::kInvalidArgument, "all of --n11 --n10 --n01 --n00 are required");
    }
    outcome = {*m.n11, *m.n10, *m.n01, *m.n00};
  } else {
    if (m.a.empty() || m.b.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "both --a and --b are required");
    }
    const auto ra = LabeledRecords(m.a);
    const auto rb = LabeledRecords(m.b);
    std::map<std::string, const LogitRecord*> by_id;
    for (const auto& r : rb) by_id[r.id] = &r;
    if (ra.size() != rb.size() || by_id.size() != rb.size()) {
      throw Error(ErrorCode::kLengthMismatch, "prediction files cover different samples");
    }
    auto ca = std::make_unique<bool[]>(ra.size());
    auto cb = std::make_unique<bool[]>(ra.size());
    for (size_t i = 0; i < ra.size(); ++i) {
      const auto it = by_id.find(ra[i].id);
      if (it == by_id.end()) throw Error(ErrorCode::kLengthMismatch, "id " + ra[i].id + " missing in --b");
      if (it->second->label != ra[i].label) {
        throw Error(ErrorCode::kMalformedRow, "labels disagree for id " + ra[i].id);
      }
      ca[i] = Argmax(ra[i].logits) == *ra[i].label;
      cb[i] = Argmax(it->second->logits) == *ra[i].label;
    }
    outcome = TabulatePaired(std::span<const bool>(ca.get(), ra.size()),
                             std::span<const bool>(cb.get(), ra.size()));
  }
  Json report = NewReport("mcnemar", seed);
  const Json row = McNemarJson(outcome);
  for (const auto& [k, v] : row.items()) report[k] = v;
  return report;
}

struct BootstrapArgs {
  std::string scores;
  int replicates = kDefaultF1BootstrapReplicates;
  double level = 0.95;
};

Json RunBootstrap(const BootstrapArgs& a, uint64_t seed) {
  std::vector<double> values;
  for (const auto& r : ReadScoresCsv(a.scores)) values.push_back(r.score);
  const auto result = PercentileBootstrap<double>(
      values, [](std::span<const double> v) { return Mean(v); }, a.replicates, seed, a.level);
  Json report = NewReport("bootstrap", seed);
  report["statistic"] = "mean";
  report["n"] = values.size();
  report["replicates"] = a.replicates;
  report["level"] = a.level;
  report["estimate"] = RoundFixed(result.estimate);
  report["ci"] = Json::array({RoundFixed(result.lo), RoundFixed(result.hi)});
  return report;
}

struct DedupArgs {
  std::string in, keep_out;
  int max_dist = kDefaultMaxHashDistance;
};

Json RunDedup(const DedupArgs& a, uint64_t seed) {
  const auto files = ListFiles(a.in, {".ppm", ".pgm"});
  if (files.empty()) throw Error(ErrorCode::kEmptyInput, "no .ppm/.pgm images in " + a.in);
  std::vector<HashEntry> entries;
  for (const auto& f : files) entries.push_back({f.filename().string(), PHash64(ReadImage(f))});
  const auto result = ClusterNearDuplicates(entries, a.max_dist);
  Json clusters = Json::array();
  for (const auto& c : result.clusters) {
    if (c.size() > 1) clusters.push_back(c);
  }
  Json report = NewReport("dedup", seed);
  report["n_images"] = entries.size();
  report["max_dist"] = a.max_dist;
  report["duplicate_clusters"] = std::move(clusters);
  report["removed"] = result.removed;
  report["removed_percent"] = RoundFixed(result.removed_percent);
  report["keep"] = result.representatives;
  if (!a.keep_out.empty()) {
    std::ofstream keep(a.keep_out);
    if (!keep) throw Error(ErrorCode::kIoError, "cannot open " + a.keep_out);
    for (const auto& id : result.representatives) keep << id << '\n';
  }
  return report;
}

struct SplitArgs {
  std::string labels;
  std::vector<double> ratios = {0.70, 0.15, 0.15};
  int num_classes = 0;
};

Json RunSplit(const SplitArgs& a, uint64_t seed) {
  const auto rows = ReadLabelsCsv(a.labels);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no label rows");
  if (a.ratios.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--ratios takes 3 values");
  std::vector<int> labels;
  for (const auto& r : rows) labels.push_back(r.label);
  const int c = InferClassCount(labels, a.num_classes);
  const auto split = StratifiedSplit(labels, c, {a.ratios[0], a.ratios[1], a.ratios[2]}, seed);
  static const char* kParts[] = {"train", "val", "test"};
  Json counts = Json::array();
  for (int k = 0; k < c; ++k) {
    counts.push_back(Json{{"class", k},
                          {"train", split.counts[k][0]},
                          {"val", split.counts[k][1]},
                          {"test", split.counts[k][2]}});
  }
  Json assignment = Json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    assignment.push_back(Json{{"id", rows[i].id}, {"part", kParts[static_cast<int>(split.part[i])]}});
  }
  Json report = NewReport("split", seed);
  report["ratios"] = a.ratios;
  report["counts"] = std::move(counts);
  report["empty_classes"] = split.empty_classes;
  report["assignment"] = std::move(assignment);
  return report;
}

struct FoldArgs {
  std::string labels;
  int outer = 5, inner = 3, num_classes = 0;
};

Json RunFolds(const FoldArgs& a, uint64_t seed) {
  const auto rows = ReadLabelsCsv(a.labels);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no label rows");
  std::vector<int> labels;
  for (const auto& r : rows) labels.push_back(r.label);
  const auto plan = NestedFoldPlan(labels, InferClassCount(labels, a.num_classes), a.outer,
                                   a.inner, seed);
  AuditFoldPlan(plan);
  auto ids = [&](const std::vector<size_t>& idx) {
    Json out = Json::array();
    for (size_t i : idx) out.push_back(rows[i].id);
    return out;
  };
  Json outer = Json::array();
  for (const auto& f : plan.outer) {
    Json inner = Json::array();
    for (const auto& v : f.inner) inner.push_back(ids(v.validation));
    outer.push_back(Json{{"test", ids(f.test)}, {"inner_validation", std::move(inner)}});
  }
  Json report = NewReport("folds", seed);
  report["outer"] = a.outer;
  report["inner"] = a.inner;
  report["leakage_audit_passed"] = true;
  report["folds"] = std::move(outer);
  return report;
}

struct NestedArgs {
  std::string features, grid;
  int outer = 5, inner = 3, num_classes = 0;
};

Json RunNestedCv(const NestedArgs& a, uint64_t seed) {
  const auto rows = ReadFeaturesCsv(a.features);
  if (rows.empty()) throw Error(ErrorCode::kEmptyDataset, "no feature rows");
  Dataset data;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) throw Error(ErrorCode::kBadLabelIndex, "nested-cv needs labels", i + 1);
    data.x.push_back(rows[i].features);
    data.y.push_back(*rows[i].label);
  }
  data.num_classes = InferClassCount(data.y, a.num_classes);
  HyperGrid grid = DefaultHyperGrid();
  if (!a.grid.empty()) {
    std::ifstream in(a.grid);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + a.grid);
    nlohmann::json json;
    try {
      json = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedHeader, std::string("bad grid JSON: ") + e.what());
    }
    grid = HyperGrid::FromJson(json);
  }
  const auto result = NestedCvRun(grid, data, a.outer, a.inner, seed);
  Json report = NewReport("nested-cv", seed);
  report["grid"] = Json(grid.ToJson());
  const Json body = NestedCvJson(result);
  for (const auto& [k, v] : body.items()) report[k] = v;
  return report;
}

struct PseudoArgs {
  std::string in, out, masked_out;
  PseudoMaskOptions options;
  bool eight = false;
};

Json RunPseudoMask(PseudoArgs a, uint64_t seed) {
  const auto files = ListFiles(a.in, {".ppm"});
  if (files.empty()) throw Error(ErrorCode::kEmptyInput, "no .ppm images in " + a.in);
  if (a.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out mask directory is required");
  fs::create_directories(a.out);
  if (!a.masked_out.empty()) fs::create_directories(a.masked_out);
  if (a.eight) a.options.grabcut.connectivity = Connectivity::kEight;
  Json images = Json::array();
  for (const auto& f : files) {
    const auto image = ReadPpm(f);
    const std::string name = f.filename().string();
    const auto result = GeneratePseudoMask(image, DeriveSeed(seed, NameStream(name)), a.options);
    WritePgm(fs::path(a.out) / (f.stem().string() + ".pgm"), result.mask);
    if (!a.masked_out.empty()) {
      WritePpm(fs::path(a.masked_out) / name, ApplyMask(image, result.mask));
    }
    Json energy = Json::array();
    for (double e : result.energy) energy.push_back(RoundFixed(e));
    images.push_back(Json{
        {"id", name},
        {"box", Json::array({result.box.x, result.box.y, result.box.width, result.box.height})},
        {"degenerate", result.degenerate},
        {"foreground_fraction",
         RoundFixed(static_cast<double>(result.mask.count()) / result.mask.size())},
        {"energy", std::move(energy)}});
  }
  Json report = NewReport("pseudomask", seed);
  const auto& g = a.options.grabcut;
  report["params"] = Json{{"iterations", g.iterations},
                          {"components", g.components},
                          {"lambda", g.lambda},
                          {"open", a.options.open_radius},
                          {"close", a.options.close_radius},
                          {"order", a.options.close_first ? "close-open" : "open-close"},
                          {"connectivity", a.eight ? 8 : 4}};
  report["images"] = std::move(images);
  return report;
}

int ExitCodeFor(const Error& e) {
  switch (CategoryOf(e.code())) {
    case ErrorCategory::kUsage:
      return kExitUsage;
    case ErrorCategory::kNumeric:
      return kExitNumeric;
    case ErrorCategory::kMalformedInput:
      break;
  }
  return kExitMalformedInput;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"freshkit: confidence scoring, evaluation, statistics, dataset hygiene and "
               "pseudo-mask tools. Every subcommand writes one JSON report.",
               "freshkit"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 ok, 1 usage error, 2 malformed input, 3 numeric failure.");
  Globals globals;
  AddGlobals(&app, globals);

  std::map<CLI::App*, std::function<Json()>> actions;

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Per-sample MSP, Energy or ODIN scores");
  AddGlobals(s, globals);
  s->add_option("--logits", score.logits, "Logit CSV (msp, energy)");
  s->add_option("--method", score.method, "msp | energy | odin")->capture_default_str();
  s->add_option("--temperature", score.temperature,
                "Softmax temperature (default 1; 1000 for odin)");
  s->add_option("--features", score.features, "Features CSV (odin)");
  s->add_option("--model", score.model, "Model JSON (odin)");
  s->add_option("--epsilon", score.epsilon, "ODIN perturbation size")->capture_default_str();
  s->add_option("--scores-out", score.scores_out, "Also write a scores CSV");
  s->footer(std::string(kLogitFormat) + "\n" + kFeatureFormat + "\n" + kModelFormat +
            "\nEnergy rows carry the native energy and score = -energy.");
  actions[s] = [&] { return RunScore(score, globals.seed); };

  DetectorArgs ood;
  auto* o = app.add_subcommand("ood-eval", "AUROC, AUPR-In and FPR@95TPR of a detector");
  AddGlobals(o, globals);
  o->add_option("--scores", ood.scores, "Scores CSV with is_id");
  o->add_option("--logits", ood.logits, "Logit CSV; ood rows are the negatives");
  o->add_option("--method", ood.method, "msp | energy (with --logits)")->capture_default_str();
  o->add_option("--temperature", ood.temperature, "Temperature")->capture_default_str();
  o->footer(std::string(kScoreFormat) + "\n" + kLogitFormat);
  actions[o] = [&] { return RunOodEval(ood, globals.seed); };

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Coverage and rejection over abstention thresholds");
  AddGlobals(w, globals);
  w->add_option("--scores", sweep.scores, "Scores CSV of confidences in [0,1]");
  w->add_option("--logits", sweep.logits, "Logit CSV; confidences are MSP");
  w->add_option("--temperature", sweep.temperature, "Temperature for MSP")->capture_default_str();
  w->add_option("--taus", sweep.taus, "Comma-separated ascending thresholds "
                                      "(default 0.2,0.3,0.4,0.45,0.5,0.55,0.6,0.7,0.8)")
      ->delimiter(',');
  w->add_flag("--raw", sweep.raw, "Thresholds on an arbitrary score scale (e.g. -energy)");
  w->footer(std::string(kScoreFormat) + "\n" + kLogitFormat +
            "\nA sample is kept when its confidence is >= tau.");
  actions[w] = [&] { return RunSweep(sweep, globals.seed); };

  ClsArgs cls;
  auto* c = app.add_subcommand("cls-eval", "Confusion matrix, per-class and macro P/R/F1");
  AddGlobals(c, globals);
  c->add_option("--logits", cls.logits, "Logit CSV; unlabeled rows are skipped")->required();
  c->add_option("--class-names", cls.class_names, "Comma-separated class names")
      ->delimiter(',');
  c->add_option("--tau", cls.tau, "Abstain when MSP < tau; abstained rows are excluded");
  c->add_option("--alpha", cls.alpha, "Label smoothing for the reported cross-entropy")
      ->capture_default_str();
  c->add_option("--replicates", cls.replicates, "Bootstrap replicates for F1 CIs")
      ->capture_default_str();
  c->footer(kLogitFormat);
  actions[c] = [&] { return RunClsEval(cls, globals.seed); };

  SegArgs seg;
  auto* g = app.add_subcommand("seg-eval", "IoU, Dice, precision, recall and pixel accuracy");
  AddGlobals(g, globals);
  g->add_option("--pred", seg.pred, "Directory of predicted PGM masks")->required();
  g->add_option("--gt", seg.gt, "Directory of ground-truth PGM masks")->required();
  g->add_option("--classes", seg.classes, "Labels CSV keyed by mask file stem");
  g->add_option("--class-names", seg.class_names, "Comma-separated class names")
      ->delimiter(',');
  g->add_option("--replicates", seg.replicates, "Image-level bootstrap replicates")
      ->capture_default_str();
  g->footer(std::string("Masks: binary PGM (P5, maxval 255, >=128 is foreground), matched "
                        "by file name.\n") +
            kLabelFormat);
  actions[g] = [&] { return RunSegEval(seg, globals.seed); };

  McNemarArgs mc;
  auto* m = app.add_subcommand("mcnemar", "Continuity-corrected McNemar test and paired CI");
  AddGlobals(m, globals);
  m->add_option("--n11", mc.n11, "Both correct");
  m->add_option("--n10", mc.n10, "Only A correct");
  m->add_option("--n01", mc.n01, "Only B correct");
  m->add_option("--n00", mc.n00, "Both wrong");
  m->add_option("--a", mc.a, "Logit CSV of model A");
  m->add_option("--b", mc.b, "Logit CSV of model B (same ids and labels)");
  m->footer(std::string(kLogitFormat) + "\nPredictions are the arg-max of the logits.");
  actions[m] = [&] { return RunMcNemar(mc, globals.seed); };

  BootstrapArgs boot;
  auto* b = app.add_subcommand("bootstrap", "Percentile bootstrap CI of a mean");
  AddGlobals(b, globals);
  b->add_option("--scores", boot.scores, "Scores CSV; the score column is resampled")
      ->required();
  b->add_option("--replicates", boot.replicates, "Replicates")->capture_default_str();
  b->add_option("--level", boot.level, "Confidence level")->capture_default_str();
  b->footer(kScoreFormat);
  actions[b] = [&] { return RunBootstrap(boot, globals.seed); };

  DedupArgs dd;
  auto* d = app.add_subcommand("dedup", "Perceptual-hash near-duplicate clustering");
  AddGlobals(d, globals);
  d->add_option("--in", dd.in, "Directory of PPM (P6) / PGM (P5) images")->required();
  d->add_option("--max-dist", dd.max_dist, "Hamming distance threshold")->capture_default_str();
  d->add_option("--keep-out", dd.keep_out, "Write kept file names, one per line");
  d->footer("Images: binary PPM/PGM with maxval 255. The kept image of each cluster is the "
            "smallest file name.");
  actions[d] = [&] { return RunDedup(dd, globals.seed); };

  SplitArgs sp;
  auto* p = app.add_subcommand("split", "Stratified train/val/test split");
  AddGlobals(p, globals);
  p->add_option("--labels", sp.labels, "Labels CSV")->required();
  p->add_option("--ratios", sp.ratios, "Three comma-separated fractions summing to 1")
      ->delimiter(',')
      ->capture_default_str();
  p->add_option("--num-classes", sp.num_classes, "Class count (default: max label + 1)");
  p->footer(kLabelFormat);
  actions[p] = [&] { return RunSplit(sp, globals.seed); };

  FoldArgs fo;
  auto* f = app.add_subcommand("folds", "Nested stratified fold plan with leakage audit");
  AddGlobals(f, globals);
  f->add_option("--labels", fo.labels, "Labels CSV")->required();
  f->add_option("--outer", fo.outer, "Outer folds")->capture_default_str();
  f->add_option("--inner", fo.inner, "Inner folds")->capture_default_str();
  f->add_option("--num-classes", fo.num_classes, "Class count (default: max label + 1)");
  f->footer(kLabelFormat);
  actions[f] = [&] { return RunFolds(fo, globals.seed); };

  NestedArgs nc;
  auto* n = app.add_subcommand("nested-cv", "Nested CV with two-stage grid search");
  AddGlobals(n, globals);
  n->add_option("--features", nc.features, "Labeled features CSV")->required();
  n->add_option("--grid", nc.grid, "Grid JSON overriding the default search space");
  n->add_option("--outer", nc.outer, "Outer folds")->capture_default_str();
  n->add_option("--inner", nc.inner, "Inner folds")->capture_default_str();
  n->add_option("--num-classes", nc.num_classes, "Class count (default: max label + 1)");
  n->footer(std::string(kFeatureFormat) +
            "\nGrid JSON keys (all optional): head_lr, weight_decay, label_smoothing, "
            "backbone_lr, mixup_alpha (lists), top_k, hidden_dim, epochs, batch_size, "
            "head_warmup_epochs, rebalance.");
  actions[n] = [&] { return RunNestedCv(nc, globals.seed); };

  PseudoArgs pm;
  auto* q = app.add_subcommand("pseudomask", "GrabCut pseudo-masks from a box prior");
  q->add_option("--seed", globals.seed, "Random seed (default 42)");
  q->add_option("--in", pm.in, "Directory of PPM (P6) images")->required();
  q->add_option("--out", pm.out, "Directory for PGM masks")->required();
  q->add_option("--report", globals.out, "Write the JSON report here instead of stdout");
  q->add_option("--masked-out", pm.masked_out, "Also write images with background zeroed");
  q->add_option("--iters", pm.options.grabcut.iterations, "GrabCut iterations")
      ->capture_default_str();
  q->add_option("--k", pm.options.grabcut.components, "GMM components")->capture_default_str();
  q->add_option("--lambda", pm.options.grabcut.lambda, "Smoothness weight")
      ->capture_default_str();
  q->add_option("--open", pm.options.open_radius, "Opening radius (0 = off)")
      ->capture_default_str();
  q->add_option("--close", pm.options.close_radius, "Closing radius (0 = off)")
      ->capture_default_str();
  q->add_flag("--close-first", pm.options.close_first, "Close before opening");
  q->add_flag("--eight-connected", pm.eight, "Use 8-neighbor smoothness links");
  q->footer("Masks are written as <stem>.pgm (255 = foreground).");
  actions[q] = [&] { return RunPseudoMask(pm, globals.seed); };

  auto* e = app.add_subcommand("demo", "End-to-end run on synthetic features");
  AddGlobals(e, globals);
  actions[e] = [&] { return RunDemo(globals.seed).report; };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      const Json report = actions.at(sub)();
      Emit(report, globals.out, out);
    }
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return ExitCodeFor(ex);
  } catch (const std::filesystem::filesystem_error& ex) {
    err << "error: IoError: " << ex.what() << "\n";
    return kExitMalformedInput;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitMalformedInput;
  }
  return kExitOk;
}

}  // namespace freshkit
