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

#include "freshkit/io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "freshkit/error.h"

namespace freshkit {
namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

bool ReadLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::optional<double> ParseDouble(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

std::optional<long long> ParseInt(const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
  return out;
}

// Reads the header line; an empty stream is EmptyInput.
std::vector<std::string> ReadHeader(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line)) {
    throw Error(ErrorCode::kEmptyInput, "file is empty");
  }
  return SplitFields(line);
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::vector<LogitRecord> ReadLogitCsv(std::istream& in) {
  const auto header = ReadHeader(in);
  if (header.size() < 4 || header[0] != "id" || header[1] != "split" ||
      header[2] != "label") {
    throw Error(ErrorCode::kMalformedHeader,
                "expected 'id,split,label,logit_0,...'");
  }
  const size_t num_classes = header.size() - 3;
  for (size_t c = 0; c < num_classes; ++c) {
    if (header[3 + c] != "logit_" + std::to_string(c)) {
      throw Error(ErrorCode::kMalformedHeader,
                  "column " + std::to_string(4 + c) + " must be logit_" +
                      std::to_string(c));
    }
  }

  std::vector<LogitRecord> records;
  std::string line;
  size_t row = 0;
  while (ReadLine(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kInconsistentWidth,
                  "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()),
                  row);
    }
    LogitRecord record;
    record.id = fields[0];
    if (record.id.empty()) {
      throw Error(ErrorCode::kMalformedRow, "empty id", row);
    }
    const auto split = ParseSplit(fields[1]);
    if (!split) {
      throw Error(ErrorCode::kMalformedRow, "unknown split '" + fields[1] + "'",
                  row);
    }
    record.split = *split;
    if (!fields[2].empty()) {
      const auto label = ParseInt(fields[2]);
      if (!label || *label < 0 || *label >= static_cast<long long>(num_classes)) {
        throw Error(ErrorCode::kBadLabelIndex,
                    "label '" + fields[2] + "' outside [0, " +
                        std::to_string(num_classes) + ")",
                    row);
      }
      if (record.split == Split::kOod) {
        throw Error(ErrorCode::kBadLabelIndex, "ood rows must be unlabeled", row);
      }
      record.label = static_cast<int>(*label);
    }
    record.logits.reserve(num_classes);
    for (size_t c = 0; c < num_classes; ++c) {
      const auto value = ParseDouble(fields[3 + c]);
      if (!value) {
        throw Error(ErrorCode::kMalformedRow,
                    "logit_" + std::to_string(c) + " is not a number", row);
      }
      if (!std::isfinite(*value)) {
        throw Error(ErrorCode::kNonFiniteLogit,
                    "logit_" + std::to_string(c) + " is not finite", row);
      }
      record.logits.push_back(*value);
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<LogitRecord> ReadLogitCsv(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadLogitCsv(in);
}

void WriteLogitCsv(std::ostream& out, const std::vector<LogitRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no records to write");
  }
  const size_t num_classes = records.front().logits.size();
  out << "id,split,label";
  for (size_t c = 0; c < num_classes; ++c) out << ",logit_" << c;
  out << '\n';
  for (const auto& record : records) {
    if (record.logits.size() != num_classes) {
      throw Error(ErrorCode::kInconsistentWidth, "record '" + record.id +
                                                     "' has a different width");
    }
    out << record.id << ',' << SplitName(record.split) << ',';
    if (record.label) out << *record.label;
    for (double v : record.logits) out << ',' << FormatDouble(v);
    out << '\n';
  }
}

void WriteLogitCsv(const std::filesystem::path& path,
                   const std::vector<LogitRecord>& records) {
  auto out = OpenOut(path);
  WriteLogitCsv(out, records);
}

std::vector<ScoreRow> ReadScoresCsv(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const auto header = ReadHeader(in);
  const bool has_is_id = header.size() == 3 && header[2] == "is_id";
  if (header.size() < 2 || header[0] != "id" || header[1] != "score" ||
      (header.size() == 3 && !has_is_id) || header.size() > 3) {
    throw Error(ErrorCode::kMalformedHeader, "expected 'id,score[,is_id]'");
  }
  std::vector<ScoreRow> rows;
  std::string line;
  size_t row = 0;
  while (ReadLine(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kInconsistentWidth, "wrong field count", row);
    }
    ScoreRow parsed;
    parsed.id = fields[0];
    const auto score = ParseDouble(fields[1]);
    if (!score) throw Error(ErrorCode::kMalformedRow, "bad score", row);
    if (!std::isfinite(*score)) {
      throw Error(ErrorCode::kNonFiniteLogit, "score is not finite", row);
    }
    parsed.score = *score;
    if (has_is_id) {
      if (fields[2] != "0" && fields[2] != "1") {
        throw Error(ErrorCode::kMalformedRow, "is_id must be 0 or 1", row);
      }
      parsed.is_id = fields[2] == "1";
    }
    rows.push_back(std::move(parsed));
  }
  return rows;
}

void WriteScoresCsv(const std::filesystem::path& path,
                    const std::vector<ScoreRow>& rows) {
  auto out = OpenOut(path);
  const bool has_is_id = !rows.empty() && rows.front().is_id.has_value();
  out << "id,score" << (has_is_id ? ",is_id" : "") << '\n';
  for (const auto& row : rows) {
    out << row.id << ',' << FormatDouble(row.score);
    if (has_is_id) out << ',' << (row.is_id.value_or(false) ? 1 : 0);
    out << '\n';
  }
}

std::vector<LabeledId> ReadLabelsCsv(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const auto header = ReadHeader(in);
  if (header.size() != 2 || header[0] != "id" || header[1] != "label") {
    throw Error(ErrorCode::kMalformedHeader, "expected 'id,label'");
  }
  std::vector<LabeledId> rows;
  std::string line;
  size_t row = 0;
  while (ReadLine(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = SplitFields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kInconsistentWidth, "wrong field count", row);
    }
    const auto label = ParseInt(fields[1]);
    if (!label || *label < 0) {
      throw Error(ErrorCode::kBadLabelIndex, "bad label '" + fields[1] + "'", row);
    }
    rows.push_back({fields[0], static_cast<int>(*label)});
  }
  return rows;
}

std::vector<FeatureRow> ReadFeaturesCsv(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const auto header = ReadHeader(in);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw Error(ErrorCode::kMalformedHeader, "expected 'id,label,f_0,...'");
  }
  const size_t dim = header.size() - 2;
  for (size_t d = 0; d < dim; ++d) {
    if (header[2 + d] != "f_" + std::to_string(d)) {
      throw Error(ErrorCode::kMalformedHeader,
                  "column " + std::to_string(3 + d) + " must be f_" +
                      std::to_string(d));
    }
  }
  std::vector<FeatureRow> rows;
  std::string line;
  size_t row = 0;
  while (ReadLine(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kInconsistentWidth, "wrong field count", row);
    }
    FeatureRow parsed;
    parsed.id = fields[0];
    if (!fields[1].empty()) {
      const auto label = ParseInt(fields[1]);
      if (!label || *label < 0) {
        throw Error(ErrorCode::kBadLabelIndex, "bad label '" + fields[1] + "'",
                    row);
      }
      parsed.label = static_cast<int>(*label);
    }
    for (size_t d = 0; d < dim; ++d) {
      const auto value = ParseDouble(fields[2 + d]);
      if (!value) throw Error(ErrorCode::kMalformedRow, "bad feature", row);
      if (!std::isfinite(*value)) {
        throw Error(ErrorCode::kNonFiniteLogit, "feature is not finite", row);
      }
      parsed.features.push_back(*value);
    }
    rows.push_back(std::move(parsed));
  }
  return rows;
}

void WriteFeaturesCsv(const std::filesystem::path& path,
                      const std::vector<FeatureRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no rows to write");
  auto out = OpenOut(path);
  out << "id,label";
  for (size_t d = 0; d < rows.front().features.size(); ++d) out << ",f_" << d;
  out << '\n';
  for (const auto& row : rows) {
    out << row.id << ',';
    if (row.label) out << *row.label;
    for (double v : row.features) out << ',' << FormatDouble(v);
    out << '\n';
  }
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string NextToken(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

struct NetpbmHeader {
  int width = 0;
  int height = 0;
};

NetpbmHeader ReadNetpbmHeader(std::istream& in, const std::string& magic) {
  char m[2] = {0, 0};
  in.read(m, 2);
  if (in.gcount() != 2 || std::string(m, 2) != magic) {
    throw Error(ErrorCode::kBadMagic, "expected magic " + magic);
  }
  const auto width = ParseInt(NextToken(in));
  const auto height = ParseInt(NextToken(in));
  const auto maxval = ParseInt(NextToken(in));
  if (!width || !height || !maxval || *width <= 0 || *height <= 0 ||
      *maxval <= 0) {
    throw Error(ErrorCode::kMalformedHeader, "bad netpbm header");
  }
  if (*maxval != 255) {
    throw Error(ErrorCode::kUnsupportedMaxval,
                "maxval " + std::to_string(*maxval) + " (only 255 supported)");
  }
  return {static_cast<int>(*width), static_cast<int>(*height)};
}

std::vector<uint8_t> ReadPayload(std::istream& in, size_t bytes) {
  std::vector<uint8_t> payload(bytes);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(bytes));
  if (static_cast<size_t>(in.gcount()) != bytes) {
    throw Error(ErrorCode::kTruncatedPayload,
                "expected " + std::to_string(bytes) + " bytes, got " +
                    std::to_string(in.gcount()));
  }
  return payload;
}

}  // namespace

BinaryMask ReadPgm(std::istream& in) {
  const auto header = ReadNetpbmHeader(in, "P5");
  BinaryMask mask(header.width, header.height);
  const auto payload = ReadPayload(in, mask.size());
  for (size_t i = 0; i < payload.size(); ++i) {
    mask.set_index(i, payload[i] >= 128);
  }
  return mask;
}

BinaryMask ReadPgm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadPgm(in);
}

void WritePgm(std::ostream& out, const BinaryMask& mask) {
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::vector<char> payload(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) {
    payload[i] = static_cast<char>(mask[i] ? 255 : 0);
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

void WritePgm(const std::filesystem::path& path, const BinaryMask& mask) {
  auto out = OpenOut(path);
  WritePgm(out, mask);
}

RgbImage ReadPpm(std::istream& in) {
  const auto header = ReadNetpbmHeader(in, "P6");
  RgbImage image(header.width, header.height);
  image.mutable_bytes() = ReadPayload(in, 3 * image.pixel_count());
  return image;
}

RgbImage ReadPpm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadPpm(in);
}

RgbImage ReadGrayPgm(std::istream& in) {
  const auto header = ReadNetpbmHeader(in, "P5");
  RgbImage image(header.width, header.height);
  const auto payload = ReadPayload(in, image.pixel_count());
  auto& bytes = image.mutable_bytes();
  for (size_t i = 0; i < payload.size(); ++i) {
    bytes[3 * i] = bytes[3 * i + 1] = bytes[3 * i + 2] = payload[i];
  }
  return image;
}

RgbImage ReadImage(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  in.seekg(0);
  if (in.gcount() == 2 && magic[0] == 'P' && magic[1] == '5') return ReadGrayPgm(in);
  return ReadPpm(in);
}

void WritePpm(std::ostream& out, const RgbImage& image) {
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.bytes().data()),
            static_cast<std::streamsize>(image.bytes().size()));
}

void WritePpm(const std::filesystem::path& path, const RgbImage& image) {
  auto out = OpenOut(path);
  WritePpm(out, image);
}

}  // namespace freshkit
