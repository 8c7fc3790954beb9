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

// File formats.
//
// Logit CSV:    id,split,label,logit_0,...,logit_{C-1}
//               split in {train,val,test,ood}; empty label = unlabeled.
// Scores CSV:   id,score[,is_id]           (is_id is 0 or 1)
// Labels CSV:   id,label                   (label is a class index)
// Features CSV: id,label,f_0,...,f_{D-1}
// Masks:        binary PGM (P5, maxval 255), pixel >= 128 is foreground.
// Images:       binary PPM (P6, maxval 255).
//
// Parsers reject malformed input instead of repairing it. Fields are plain
// comma-separated values; quoting is not supported.

#ifndef FRESHKIT_IO_H_
#define FRESHKIT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freshkit/data_model.h"

namespace freshkit {

std::vector<LogitRecord> ReadLogitCsv(std::istream& in);
std::vector<LogitRecord> ReadLogitCsv(const std::filesystem::path& path);
void WriteLogitCsv(std::ostream& out, const std::vector<LogitRecord>& records);
void WriteLogitCsv(const std::filesystem::path& path,
                   const std::vector<LogitRecord>& records);

struct ScoreRow {
  std::string id;
  double score = 0.0;
  std::optional<bool> is_id;
};
std::vector<ScoreRow> ReadScoresCsv(const std::filesystem::path& path);
void WriteScoresCsv(const std::filesystem::path& path,
                    const std::vector<ScoreRow>& rows);

struct LabeledId {
  std::string id;
  int label = 0;
};
std::vector<LabeledId> ReadLabelsCsv(const std::filesystem::path& path);

struct FeatureRow {
  std::string id;
  std::optional<int> label;
  std::vector<double> features;
};
std::vector<FeatureRow> ReadFeaturesCsv(const std::filesystem::path& path);
void WriteFeaturesCsv(const std::filesystem::path& path,
                      const std::vector<FeatureRow>& rows);

BinaryMask ReadPgm(std::istream& in);
BinaryMask ReadPgm(const std::filesystem::path& path);
void WritePgm(std::ostream& out, const BinaryMask& mask);
void WritePgm(const std::filesystem::path& path, const BinaryMask& mask);

RgbImage ReadPpm(std::istream& in);
RgbImage ReadPpm(const std::filesystem::path& path);
void WritePpm(std::ostream& out, const RgbImage& image);

// 8-bit grayscale P5 as an RGB image with equal channels.
RgbImage ReadGrayPgm(std::istream& in);
// P5 (grayscale) or P6 by magic.
RgbImage ReadImage(const std::filesystem::path& path);
void WritePpm(const std::filesystem::path& path, const RgbImage& image);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace freshkit

#endif  // FRESHKIT_IO_H_
