// Copyright 2026 The SDP Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdp/core.hpp"

namespace sdp {

/// Sparse top-k encoding of a Gradient. Indices are strictly increasing and
/// surviving values are bit-identical to the source vector's.
struct CompressedGradient {
  struct Entry {
    std::uint32_t index = 0;
    double value = 0.0;
    bool operator==(const Entry&) const = default;
  };

  std::uint32_t dim = 0;
  double ratio = 0.0;  // ratio used to produce it; 0 when unknown (decoded empties)
  std::vector<Entry> entries;

  bool operator==(const CompressedGradient&) const = default;
};

/// Number of coordinates kept at a given ratio: ceil(ratio * dim), with the
/// product evaluated in exact integer arithmetic so the count never drifts
/// off by one from rounding.
std::size_t top_k_count(double ratio, std::size_t dim);

/// Keep the ceil(ratio*d) largest-magnitude coordinates, ties broken toward
/// the lower index. ratio must be in (0, 1].
CompressedGradient compress(const Gradient& g, double ratio);

/// Dense vector of length dim with cg's values in place and zeros elsewhere.
/// Throws CodecError on duplicate/descending/out-of-range indices.
Gradient decompress(const CompressedGradient& cg);

/// Coordinate-wise sum of the decompressed inputs, accumulated in list order
/// (then index order within each input). All inputs must share dim.
Gradient aggregate_compressed(std::span<const CompressedGradient> cgs);

/// Wire format: little-endian u32 dim, u32 entry count, then
/// (u32 index, f64 value) pairs ascending by index.
std::vector<std::uint8_t> encode(const CompressedGradient& cg);

/// Append cg's encoding to out.
void encode_to(std::vector<std::uint8_t>& out, const CompressedGradient& cg);

/// Serialized size in bytes: 8 + 12 * |entries|.
std::size_t encoded_size(const CompressedGradient& cg);

/// Decode one record starting at bytes[offset]; advances offset past it.
/// Throws CodecError on truncation or malformed entries.
CompressedGradient decode(std::span<const std::uint8_t> bytes, std::size_t& offset);

/// Decode a single record occupying the whole buffer.
CompressedGradient decode(std::span<const std::uint8_t> bytes);

}  // namespace sdp
