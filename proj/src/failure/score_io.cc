// Copyright 2026 The segloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include "segloop/bytes.h"
#include "segloop/error.h"
#include "segloop/failure.h"

namespace segloop {
namespace {

struct GridHeader {
  std::uint32_t width;
  std::uint32_t height;
};

GridHeader ReadHeader(ByteReader& r, std::string_view magic) {
  r.ExpectMagic(magic);
  const std::uint32_t version = r.U32();
  if (version != 1) throw Error(ErrorCode::kBadFormat, std::string(magic) + " version " + std::to_string(version));
  GridHeader h{r.U32(), r.U32()};
  if (h.width == 0 || h.height == 0) throw Error(ErrorCode::kBadFormat, std::string(magic) + " has zero dimension");
  return h;
}

}  // namespace

std::vector<std::uint8_t> EncodeScoreMap(const ScoreMap& map) {
  ByteWriter w;
  w.Magic("SEGF");
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(map.width()));
  w.U32(static_cast<std::uint32_t>(map.height()));
  for (double v : map.values()) w.F32(static_cast<float>(v));
  return w.Take();
}

ScoreMap DecodeScoreMap(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const GridHeader h = ReadHeader(r, "SEGF");
  const std::uint64_t n = static_cast<std::uint64_t>(h.width) * h.height;
  if (r.remaining() != n * 4) throw Error(ErrorCode::kTruncatedPayload, "SEGF payload size mismatch");
  std::vector<double> values(n);
  for (double& v : values) v = r.F32();
  return ScoreMap(static_cast<int>(h.width), static_cast<int>(h.height), std::move(values));
}

std::vector<std::uint8_t> EncodeLogitMap(const LogitMap& logits) {
  ByteWriter w;
  w.Magic("SEGL");
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(logits.width()));
  w.U32(static_cast<std::uint32_t>(logits.height()));
  for (double v : logits.values()) w.F32(static_cast<float>(v));
  return w.Take();
}

LogitMap DecodeLogitMap(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const GridHeader h = ReadHeader(r, "SEGL");
  const std::uint64_t n = static_cast<std::uint64_t>(h.width) * h.height * kNumClasses;
  if (r.remaining() != n * 4) throw Error(ErrorCode::kTruncatedPayload, "SEGL payload size mismatch");
  std::vector<double> values(n);
  for (double& v : values) v = r.F32();
  return LogitMap(static_cast<int>(h.width), static_cast<int>(h.height), std::move(values));
}

}  // namespace segloop
