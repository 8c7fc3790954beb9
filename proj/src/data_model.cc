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

#include "freshkit/data_model.h"

#include <algorithm>
#include <set>

#include "freshkit/error.h"

namespace freshkit {

ClassSpace::ClassSpace()
    : names_{"PackagedFresh", "PackagedSpoiled", "UnpackagedFresh",
             "UnpackagedSpoiled"} {}

ClassSpace::ClassSpace(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "class space must be non-empty");
  }
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "class names must be non-empty");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate class name '" + name + "'");
    }
  }
}

ClassSpace ClassSpace::Generic(int num_classes) {
  if (num_classes <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "class count must be positive");
  }
  std::vector<std::string> names;
  for (int c = 0; c < num_classes; ++c) {
    names.push_back("class_" + std::to_string(c));
  }
  return ClassSpace(std::move(names));
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
    case Split::kOod: return "ood";
  }
  return "test";
}

std::optional<Split> ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  if (text == "ood") return Split::kOod;
  return std::nullopt;
}

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be positive");
  }
  bytes_.resize(3 * pixel_count());
  for (size_t i = 0; i < pixel_count(); ++i) {
    bytes_[3 * i] = fill.r;
    bytes_[3 * i + 1] = fill.g;
    bytes_[3 * i + 2] = fill.b;
  }
}

Rgb RgbImage::at(int x, int y) const {
  const size_t i = 3 * (static_cast<size_t>(y) * width_ + x);
  return {bytes_[i], bytes_[i + 1], bytes_[i + 2]};
}

void RgbImage::set(int x, int y, Rgb value) {
  const size_t i = 3 * (static_cast<size_t>(y) * width_ + x);
  bytes_[i] = value.r;
  bytes_[i + 1] = value.g;
  bytes_[i + 2] = value.b;
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "mask dimensions must be positive");
  }
  bits_.assign(static_cast<size_t>(width) * height, fill ? 1 : 0);
}

size_t BinaryMask::count() const {
  return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

}  // namespace freshkit
