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

#include "sdp/compression.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace sdp {

std::size_t top_k_count(double ratio, std::size_t dim) {
  if (dim == 0) return 0;
  if (ratio >= 1.0) return dim;
  // ratio = mant * 2^exp with mant in [0.5, 1), so ratio*dim = m*dim*2^(exp-53)
  // for the exact 53-bit integer m. Take the ceiling with integer shifts.
  int exp = 0;
  double mant = std::frexp(ratio, &exp);
  auto m = static_cast<unsigned __int128>(std::ldexp(mant, 53));
  unsigned __int128 prod = m * static_cast<unsigned __int128>(dim);
  int shift = 53 - exp;  // >= 53 for ratio < 1
  if (shift >= 127) return prod > 0 ? 1 : 0;
  unsigned __int128 one = 1;
  unsigned __int128 k = (prod + (one << shift) - 1) >> shift;
  return static_cast<std::size_t>(k);
}

CompressedGradient compress(const Gradient& g, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw std::invalid_argument("compress: ratio must be in (0, 1]");
  const std::size_t d = g.size();
  if (d > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("compress: dimension exceeds codec limit");
  const std::size_t k = top_k_count(ratio, d);

  std::vector<std::uint32_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = static_cast<std::uint32_t>(i);
  auto larger = [&g](std::uint32_t a, std::uint32_t b) {
    double ma = std::fabs(g[a]);
    double mb = std::fabs(g[b]);
    return ma > mb || (ma == mb && a < b);
  };
  if (k < d) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                     order.end(), larger);
    order.resize(k);
  }
  std::sort(order.begin(), order.end());

  CompressedGradient cg;
  cg.dim = static_cast<std::uint32_t>(d);
  cg.ratio = ratio;
  cg.entries.reserve(k);
  for (std::uint32_t idx : order) cg.entries.push_back({idx, g[idx]});
  return cg;
}

namespace {

void check_well_formed(const CompressedGradient& cg) {
  std::int64_t prev = -1;
  for (const auto& entry : cg.entries) {
    if (entry.index >= cg.dim)
      throw CodecError("compressed gradient: index " + std::to_string(entry.index) +
                       " out of range for dim " + std::to_string(cg.dim));
    if (static_cast<std::int64_t>(entry.index) <= prev)
      throw CodecError("compressed gradient: indices must be strictly increasing");
    if (!std::isfinite(entry.value))
      throw CodecError("compressed gradient: non-finite value");
    prev = entry.index;
  }
}

}  // namespace

Gradient decompress(const CompressedGradient& cg) {
  check_well_formed(cg);
  Gradient g(cg.dim);
  for (const auto& entry : cg.entries) g[entry.index] = entry.value;
  return g;
}

Gradient aggregate_compressed(std::span<const CompressedGradient> cgs) {
  if (cgs.empty()) throw std::invalid_argument("aggregate_compressed: empty input");
  const std::uint32_t dim = cgs.front().dim;
  Gradient sum(dim);
  for (const auto& cg : cgs) {
    if (cg.dim != dim)
      throw CodecError("aggregate_compressed: dim mismatch (" + std::to_string(cg.dim) +
                       " vs " + std::to_string(dim) + ")");
    check_well_formed(cg);
    for (const auto& entry : cg.entries) sum[entry.index] += entry.value;
  }
  return sum;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

double get_f64(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[at + i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::size_t encoded_size(const CompressedGradient& cg) {
  return 8 + 12 * cg.entries.size();
}

void encode_to(std::vector<std::uint8_t>& out, const CompressedGradient& cg) {
  check_well_formed(cg);
  out.reserve(out.size() + encoded_size(cg));
  put_u32(out, cg.dim);
  put_u32(out, static_cast<std::uint32_t>(cg.entries.size()));
  for (const auto& entry : cg.entries) {
    put_u32(out, entry.index);
    put_f64(out, entry.value);
  }
}

std::vector<std::uint8_t> encode(const CompressedGradient& cg) {
  std::vector<std::uint8_t> out;
  encode_to(out, cg);
  return out;
}

CompressedGradient decode(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (bytes.size() < offset || bytes.size() - offset < 8)
    throw CodecError("compressed gradient: truncated header");
  CompressedGradient cg;
  cg.dim = get_u32(bytes, offset);
  std::uint32_t count = get_u32(bytes, offset + 4);
  if (bytes.size() - offset - 8 < static_cast<std::size_t>(count) * 12)
    throw CodecError("compressed gradient: truncated entries");
  cg.entries.reserve(count);
  std::size_t at = offset + 8;
  for (std::uint32_t i = 0; i < count; ++i) {
    CompressedGradient::Entry entry;
    entry.index = get_u32(bytes, at);
    entry.value = get_f64(bytes, at + 4);
    cg.entries.push_back(entry);
    at += 12;
  }
  check_well_formed(cg);
  // The producing ratio is not on the wire; reconstruct the smallest ratio
  // whose top-k count matches the entry count.
  if (count > 0 && cg.dim > 0) {
    double r = static_cast<double>(count) / static_cast<double>(cg.dim);
    while (top_k_count(r, cg.dim) > count) r = std::nextafter(r, 0.0);
    while (top_k_count(r, cg.dim) < count) r = std::nextafter(r, 2.0);
    cg.ratio = r;
  }
  offset = at;
  return cg;
}

CompressedGradient decode(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  CompressedGradient cg = decode(bytes, offset);
  if (offset != bytes.size())
    throw CodecError("compressed gradient: trailing bytes after record");
  return cg;
}

}  // namespace sdp
