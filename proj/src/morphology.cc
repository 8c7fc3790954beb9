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

#include <algorithm>

#include "freshkit/error.h"
#include "freshkit/pseudomask.h"

namespace freshkit {
namespace {

void CheckRadius(int radius) {
  if (radius < 1) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 1");
}

// Square-window filter done as a row pass then a column pass. With
// `all` set the window must be entirely foreground (erosion), otherwise
// any foreground pixel suffices (dilation). Only in-image pixels count.
BinaryMask SquareFilter(const BinaryMask& mask, int radius, bool all) {
  const int w = mask.width();
  const int h = mask.height();
  auto pass = [&](const BinaryMask& in, bool horizontal) {
    BinaryMask out(w, h, false);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int center = horizontal ? x : y;
        const int limit = horizontal ? w : h;
        const int lo = std::max(0, center - radius);
        const int hi = std::min(limit - 1, center + radius);
        bool value = all;
        for (int t = lo; t <= hi; ++t) {
          const bool v = horizontal ? in.at(t, y) : in.at(x, t);
          if (all ? !v : v) {
            value = !all;
            break;
          }
        }
        out.set(x, y, value);
      }
    }
    return out;
  };
  return pass(pass(mask, true), false);
}

}  // namespace

BinaryMask Erode(const BinaryMask& mask, int radius) {
  CheckRadius(radius);
  return SquareFilter(mask, radius, true);
}

BinaryMask Dilate(const BinaryMask& mask, int radius) {
  CheckRadius(radius);
  return SquareFilter(mask, radius, false);
}

BinaryMask MorphOpen(const BinaryMask& mask, int radius) {
  return Dilate(Erode(mask, radius), radius);
}

BinaryMask MorphClose(const BinaryMask& mask, int radius) {
  return Erode(Dilate(mask, radius), radius);
}

}  // namespace freshkit
