// Copyright 2026 The mvsgd Authors. All Rights Reserved.
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

#include "mvsgd/codec.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "mvsgd/errors.h"

namespace mvsgd {

int BlockLayout::position_bits() const {
  return static_cast<int>(std::bit_width(block_size - 1));
}

BlockLayout BlockLayout::for_density(double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) throw InvalidArgument("block layout: density must lie in (0, 1]");
  const double inv = 1.0 / phi;
  const double nearest = std::round(inv);
  // 1/0.01 is not exactly 100 in binary; snap near-integers before ceil.
  const double size = std::abs(inv - nearest) <= 1e-9 * inv ? nearest : std::ceil(inv);
  return BlockLayout{std::max<std::size_t>(2, static_cast<std::size_t>(size))};
}

BlockLayout BlockLayout::power_of_two(int block_bits) {
  if (block_bits < 1 || block_bits > 40) throw InvalidArgument("block layout: block_bits must be in [1, 40]");
  return BlockLayout{std::size_t{1} << block_bits};
}

namespace {

void check_layout(const BlockLayout& layout) {
  if (layout.block_size < 2) throw InvalidArgument("block layout: block size must be >= 2");
}

}  // namespace

std::size_t num_blocks(std::size_t dim, const BlockLayout& layout) {
  check_layout(layout);
  return (dim + layout.block_size - 1) / layout.block_size;
}

std::size_t encoded_mask_bits(std::size_t nonzeros, std::size_t dim,
                              const BlockLayout& layout) {
  return nonzeros * static_cast<std::size_t>(layout.position_bits() + 1) +
         num_blocks(dim, layout);
}

BitStream encode_mask(const SparseMask& mask, const BlockLayout& layout) {
  const std::size_t blocks = num_blocks(mask.dim(), layout);
  const int width = layout.position_bits();
  BitStream out;
  auto it = mask.indices().begin();
  const auto end = mask.indices().end();
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t limit = (b + 1) * layout.block_size;
    for (; it != end && *it < limit; ++it) {
      out.push_bit(true);
      out.push_bits(*it - b * layout.block_size, width);
    }
    out.push_bit(false);
  }
  return out;
}

SparseMask decode_mask(const BitStream& stream, std::size_t dim,
                       const BlockLayout& layout) {
  const std::size_t blocks = num_blocks(dim, layout);
  const int width = layout.position_bits();
  BitReader reader(stream);
  std::vector<std::size_t> indices;
  std::size_t block = 0;
  while (!reader.at_end()) {
    if (block >= blocks) throw CorruptStream("mask stream: more blocks than the index space holds");
    if (!reader.read_bit()) {
      ++block;
      continue;
    }
    const std::uint64_t offset = reader.read_bits(width);
    if (offset >= layout.block_size) throw CorruptStream("mask stream: offset outside block");
    const std::size_t index = block * layout.block_size + static_cast<std::size_t>(offset);
    if (index >= dim) throw CorruptStream("mask stream: index outside dimension");
    if (!indices.empty() && index <= indices.back()) {
      throw CorruptStream("mask stream: offsets not strictly increasing");
    }
    indices.push_back(index);
  }
  if (block != blocks) throw CorruptStream("mask stream: missing block terminators");
  return SparseMask(dim, std::move(indices));
}

int interval_index(double magnitude, double v_max, double v_min, int levels) {
  if (levels <= 1 || v_max <= v_min || magnitude >= v_max) return 1;
  if (magnitude <= v_min) return levels;
  double t = levels * std::log(v_max / magnitude) / std::log(v_max / v_min);
  const double nearest = std::round(t);
  if (std::abs(t - nearest) <= 1e-9 * std::max(1.0, nearest)) t = nearest;
  return std::clamp(static_cast<int>(std::ceil(t)), 1, levels);
}

namespace {

void check_q(int q) {
  if (q < 1 || q > kMaxQuantBits) throw InvalidArgument("quantizer: q must be in [1, 16]");
}

}  // namespace

QuantizedBlock quantize_values(std::span<const double> values, int q) {
  check_q(q);
  const int levels = 1 << (q - 1);
  double v_max = 0.0, v_min = 0.0;
  bool any = false;
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("quantizer: non-finite value");
    const double m = std::abs(v);
    if (m == 0.0) continue;
    v_max = any ? std::max(v_max, m) : m;
    v_min = any ? std::min(v_min, m) : m;
    any = true;
  }
  if (!any) throw DegenerateInput("quantizer: all values are zero");

  QuantizedBlock block;
  block.q = q;
  block.count = values.size();
  block.v_max = v_max;
  block.v_min = v_min;
  std::vector<double> sum(levels, 0.0), lo(levels, v_max), hi(levels, v_min);
  std::vector<std::size_t> members(levels, 0);
  for (double v : values) {
    const double m = std::abs(v);
    if (m == 0.0) {
      block.codes.push_bit(false);
      block.codes.push_bits(static_cast<std::uint64_t>(levels - 1), q - 1);
      continue;
    }
    const int l = interval_index(m, v_max, v_min, levels);
    block.codes.push_bit(v < 0.0);
    block.codes.push_bits(static_cast<std::uint64_t>(l - 1), q - 1);
    sum[l - 1] += m;
    lo[l - 1] = std::min(lo[l - 1], m);
    hi[l - 1] = std::max(hi[l - 1], m);
    ++members[l - 1];
  }
  block.means.assign(levels, 0.0);
  for (int l = 0; l < levels; ++l) {
    if (members[l] == 0) continue;
    // Clamped so rounding in the sum cannot push a mean outside its members.
    block.means[l] = std::clamp(sum[l] / static_cast<double>(members[l]), lo[l], hi[l]);
  }
  return block;
}

QuantizedBlock zero_block(std::size_t count, int q) {
  check_q(q);
  QuantizedBlock block;
  block.q = q;
  block.count = count;
  block.means.assign(block.levels(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    block.codes.push_bit(false);
    block.codes.push_bits(static_cast<std::uint64_t>(block.levels() - 1), q - 1);
  }
  return block;
}

QuantizedBlock quantize_or_zero(std::span<const double> values, int q) {
  const bool all_zero = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  return all_zero ? zero_block(values.size(), q) : quantize_values(values, q);
}

std::vector<double> dequantize(const QuantizedBlock& block) {
  check_q(block.q);
  if (block.codes.bit_len() != block.count * static_cast<std::size_t>(block.q)) {
    throw CorruptStream("quantized block: code length does not match count * q");
  }
  if (block.means.size() != static_cast<std::size_t>(block.levels())) {
    throw CorruptStream("quantized block: means table does not have L entries");
  }
  BitReader reader(block.codes);
  std::vector<double> out(block.count);
  for (auto& v : out) {
    const bool negative = reader.read_bit();
    const auto l = reader.read_bits(block.q - 1);
    v = negative ? -block.means[l] : block.means[l];
  }
  return out;
}

namespace {

void push_f32(BitStream& out, double v) {
  out.push_bits(std::bit_cast<std::uint32_t>(static_cast<float>(v)), 32);
}

double read_f32(BitReader& in) {
  const float f = std::bit_cast<float>(static_cast<std::uint32_t>(in.read_bits(32)));
  if (!std::isfinite(f)) throw CorruptStream("value stream: non-finite float");
  return static_cast<double>(f);
}

}  // namespace

BitStream encode_quantized(const QuantizedBlock& block) {
  if (block.means.size() != static_cast<std::size_t>(block.levels())) {
    throw InvalidArgument("encode_quantized: means table does not have L entries");
  }
  BitStream out = block.codes;
  for (double mu : block.means) push_f32(out, mu);
  return out;
}

QuantizedBlock decode_quantized(const BitStream& stream, std::size_t count,
                                int q) {
  check_q(q);
  QuantizedBlock block;
  block.q = q;
  block.count = count;
  const std::size_t code_bits = count * static_cast<std::size_t>(q);
  if (stream.bit_len() != code_bits + static_cast<std::size_t>(block.levels()) * kMeanBits) {
    throw CorruptStream("quantized stream: length does not match (count, q)");
  }
  BitReader reader(stream);
  for (std::size_t i = 0; i < code_bits; ++i) block.codes.push_bit(reader.read_bit());
  block.means.resize(block.levels());
  bool any = false;
  for (double& mu : block.means) {
    mu = read_f32(reader);
    if (mu < 0.0) throw CorruptStream("quantized stream: negative mean");
    if (mu > 0.0) {
      block.v_max = any ? std::max(block.v_max, mu) : mu;
      block.v_min = any ? std::min(block.v_min, mu) : mu;
      any = true;
    }
  }
  return block;
}

BitStream encode_f32(std::span<const double> values) {
  BitStream out;
  for (double v : values) push_f32(out, v);
  return out;
}

std::vector<double> decode_f32(const BitStream& stream, std::size_t count) {
  if (stream.bit_len() != count * 32) throw CorruptStream("value stream: length does not match count");
  BitReader reader(stream);
  std::vector<double> out(count);
  for (double& v : out) v = read_f32(reader);
  return out;
}

}  // namespace mvsgd
