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

// Core value types shared by every module.

#ifndef FRESHKIT_DATA_MODEL_H_
#define FRESHKIT_DATA_MODEL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace freshkit {

// Ordered set of class names. The default instance is the four freshness
// classes.
class ClassSpace {
 public:
  ClassSpace();
  explicit ClassSpace(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int index) const { return names_.at(index); }

  // Returns a space named class_0 .. class_{C-1}.
  static ClassSpace Generic(int num_classes);

 private:
  std::vector<std::string> names_;
};

enum class Split { kTrain, kVal, kTest, kOod };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view text);

struct LogitRecord {
  std::string id;
  Split split = Split::kTest;
  std::optional<int> label;
  std::vector<double> logits;

  bool operator==(const LogitRecord&) const = default;
};

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb value);

  // Row-major RGB triplets, 3 * width * height bytes.
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t>& mutable_bytes() { return bytes_; }

  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bytes_;
};

// Row-major booleans, true = foreground.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return bits_.size(); }

  bool at(int x, int y) const {
    return bits_[static_cast<size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    bits_[static_cast<size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  bool operator[](size_t i) const { return bits_[i] != 0; }
  void set_index(size_t i, bool value) { bits_[i] = value ? 1 : 0; }

  size_t count() const;
  bool same_shape(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bits_;
};

// Paired 2x2 outcome counts of classifiers A and B on one test set.
// n10 = A correct and B wrong, n01 = A wrong and B correct.
struct PairedOutcome {
  int64_t n11 = 0;
  int64_t n10 = 0;
  int64_t n01 = 0;
  int64_t n00 = 0;

  int64_t total() const { return n11 + n10 + n01 + n00; }
  bool operator==(const PairedOutcome&) const = default;
};

struct SweepPoint {
  double tau = 0.0;
  double coverage = 0.0;
  double rejection = 0.0;
};

struct OodReport {
  double auroc = 0.0;
  double aupr_in = 0.0;
  double fpr_at_95tpr = 0.0;
};

// Nested cross-validation plan over sample indices.
struct InnerFold {
  std::vector<size_t> validation;
};

struct OuterFold {
  std::vector<size_t> test;
  std::vector<size_t> train;         // complement of `test`
  std::vector<InnerFold> inner;      // validation sets partition `train`
};

struct FoldPlan {
  size_t num_samples = 0;
  std::vector<OuterFold> outer;
};

}  // namespace freshkit

#endif  // FRESHKIT_DATA_MODEL_H_
