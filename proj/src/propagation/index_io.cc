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
#include "segloop/propagation.h"
#include "segloop/rle.h"

namespace segloop {
namespace {

void WriteDigest(ByteWriter& w, const Digest& d) { w.Bytes(d); }

Digest ReadDigest(ByteReader& r) {
  Digest d{};
  auto b = r.Take(d.size());
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

void WriteFloats(ByteWriter& w, const std::vector<double>& v) {
  for (double x : v) w.F32(static_cast<float>(x));
}

std::vector<double> ReadFloats(ByteReader& r, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = r.F32();
  return v;
}

}  // namespace

std::vector<std::uint8_t> EncodeIndex(const PropagationIndex& index) {
  ByteWriter w;
  w.Magic("SEGX");
  w.U32(1);
  WriteDigest(w, index.manifest_digest);
  w.U32(static_cast<std::uint32_t>(index.params.grid));
  w.F64(index.params.tolerance);
  w.U8(static_cast<std::uint8_t>(index.params.connectivity));
  w.U32(static_cast<std::uint32_t>(index.train_hashes.size()));
  for (const auto& h : index.train_hashes) WriteDigest(w, h);
  w.U32(static_cast<std::uint32_t>(index.candidates.size()));
  for (const auto& c : index.candidates) {
    w.String(c.site_id);
    w.U8(static_cast<std::uint8_t>(c.face));
    WriteDigest(w, c.image_hash);
    w.U32(static_cast<std::uint32_t>(c.selection.width()));
    w.U32(static_cast<std::uint32_t>(c.selection.height()));
    const auto runs = EncodeRle(c.selection);
    w.U32(static_cast<std::uint32_t>(runs.size()));
    for (auto run : runs) w.U32(run);
    w.U8(c.descriptor.embedding ? 1 : 0);
    WriteFloats(w, c.descriptor.hsv_hist);
    WriteFloats(w, c.descriptor.lbp_hist);
    if (c.descriptor.embedding) WriteFloats(w, *c.descriptor.embedding);
  }
  return w.Take();
}

PropagationIndex DecodeIndex(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectMagic("SEGX");
  const std::uint32_t version = r.U32();
  if (version != 1) throw Error(ErrorCode::kBadFormat, "SEGX version " + std::to_string(version));
  PropagationIndex index;
  index.manifest_digest = ReadDigest(r);
  index.params.grid = static_cast<int>(r.U32());
  index.params.tolerance = r.F64();
  index.params.connectivity = ConnectivityFromInt(r.U8());
  const std::uint32_t n_hashes = r.U32();
  for (std::uint32_t i = 0; i < n_hashes; ++i) index.train_hashes.insert(ReadDigest(r));
  const std::uint32_t n_cands = r.U32();
  for (std::uint32_t i = 0; i < n_cands; ++i) {
    CandidateRegion c;
    c.site_id = r.String();
    const std::uint8_t face = r.U8();
    if (face > static_cast<std::uint8_t>(Face::kFlat)) throw Error(ErrorCode::kBadFormat, "SEGX: bad face");
    c.face = static_cast<Face>(face);
    c.image_hash = ReadDigest(r);
    const int width = static_cast<int>(r.U32());
    const int height = static_cast<int>(r.U32());
    const std::uint32_t n_runs = r.U32();
    if (n_runs > r.remaining() / 4) throw Error(ErrorCode::kTruncatedPayload, "SEGX: run table past end");
    std::vector<std::uint32_t> runs(n_runs);
    for (auto& run : runs) run = r.U32();
    c.selection = DecodeRle(width, height, runs);
    const bool has_embedding = r.U8() != 0;
    c.descriptor.hsv_hist = ReadFloats(r, kHsvBins);
    c.descriptor.lbp_hist = ReadFloats(r, kLbpBins);
    if (has_embedding) c.descriptor.embedding = ReadFloats(r, kHiddenUnits);
    index.candidates.push_back(std::move(c));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::kBadFormat, "SEGX: trailing bytes");
  return index;
}

}  // namespace segloop
