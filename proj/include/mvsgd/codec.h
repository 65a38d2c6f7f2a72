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

#ifndef MVSGD_CODEC_H_
#define MVSGD_CODEC_H_

#include <cstddef>
#include <span>
#include <vector>

#include "mvsgd/bitstream.h"
#include "mvsgd/sparsify.h"

namespace mvsgd {

// ---------------------------------------------------------------------------
// Block position format.
//
// The index space is cut into blocks of `block_size` coordinates. For each
// block in order, every selected intra-block offset (ascending) is written as
// a 1 followed by the offset in position_bits(); the block ends with a single
// 0. Total length is |mask| * (position_bits + 1) + ceil(dim / block_size).
// ---------------------------------------------------------------------------

struct BlockLayout {
  std::size_t block_size = 2;

  // ceil(log2(block_size))
  int position_bits() const;

  // Block size ceil(1/phi) (at least 2), so a mask of density phi has about
  // one entry per block.
  static BlockLayout for_density(double phi);
  static BlockLayout power_of_two(int block_bits);

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

std::size_t num_blocks(std::size_t dim, const BlockLayout& layout);
std::size_t encoded_mask_bits(std::size_t nonzeros, std::size_t dim,
                              const BlockLayout& layout);

BitStream encode_mask(const SparseMask& mask, const BlockLayout& layout);

// Throws CorruptStream on a truncated symbol, an offset outside its block or
// the index space, or a block count other than ceil(dim / block_size).
SparseMask decode_mask(const BitStream& stream, std::size_t dim,
                       const BlockLayout& layout);

// ---------------------------------------------------------------------------
// Fractional quantizer.
//
// Nonzero magnitudes span [v_min, v_max], which is cut geometrically into
// L = 2^(q-1) intervals with ratio alpha = (v_max/v_min)^(1/L). A value is
// sent as a sign bit (0 = +, 1 = -) and its interval number l-1 in q-1 bits;
// the receiver substitutes the mean magnitude mu_l of its interval. Zeros
// travel as interval L with a + sign and are excluded from the means.
// q = 1 degenerates to the scaled sign operator (one mean, sign only).
// ---------------------------------------------------------------------------

inline constexpr int kMaxQuantBits = 16;
inline constexpr int kMeanBits = 32;

struct QuantizedBlock {
  int q = 0;
  std::size_t count = 0;
  BitStream codes;            // count * q bits
  std::vector<double> means;  // L entries; 0 for empty intervals
  double v_max = 0.0;
  double v_min = 0.0;

  int levels() const { return 1 << (q - 1); }

  friend bool operator==(const QuantizedBlock&, const QuantizedBlock&) = default;
};

// Interval number in [1, levels] for a nonzero magnitude:
// clamp(ceil(L * ln(v_max/m) / ln(v_max/v_min)), 1, L), with values within
// rounding error of an integer snapped to it so boundary magnitudes land in
// the larger-magnitude interval.
int interval_index(double magnitude, double v_max, double v_min, int levels);

// Throws DegenerateInput when every value is zero.
QuantizedBlock quantize_values(std::span<const double> values, int q);

// A block that decodes to `count` zeros: every code points at interval L
// and every mean is zero. Stands in for quantize_values on all-zero input.
QuantizedBlock zero_block(std::size_t count, int q);

// quantize_values, falling back to zero_block for all-zero input.
QuantizedBlock quantize_or_zero(std::span<const double> values, int q);

// Throws CorruptStream when the code length or means table does not match
// (count, q).
std::vector<double> dequantize(const QuantizedBlock& block);

// Wire form: count*q code bits then L IEEE-754 binary32 means.
BitStream encode_quantized(const QuantizedBlock& block);
QuantizedBlock decode_quantized(const BitStream& stream, std::size_t count, int q);

// Unquantized values: one IEEE-754 binary32 word each.
BitStream encode_f32(std::span<const double> values);
std::vector<double> decode_f32(const BitStream& stream, std::size_t count);

}  // namespace mvsgd

#endif  // MVSGD_CODEC_H_
