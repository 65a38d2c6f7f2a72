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

#include "mvsgd/bitstream.h"

#include "mvsgd/errors.h"

namespace mvsgd {

void BitStream::push_bit(bool bit) {
  if (bit_len_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_len_ % 8));
  ++bit_len_;
}

void BitStream::push_bits(std::uint64_t value, int width) {
  if (width < 0 || width > 64) throw InvalidArgument("push_bits: width must be in [0, 64]");
  for (int b = width - 1; b >= 0; --b) push_bit(((value >> b) & 1u) != 0);
}

void BitStream::append(const BitStream& other) {
  for (std::size_t i = 0; i < other.bit_len(); ++i) push_bit(other.bit(i));
}

bool BitStream::bit(std::size_t i) const {
  return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
}

BitStream BitStream::from_bytes(std::vector<std::uint8_t> bytes,
                                std::size_t bit_len) {
  if (bytes.size() != (bit_len + 7) / 8) throw CorruptStream("bit stream: byte count does not match bit length");
  if (bit_len % 8 != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFu >> (bit_len % 8));
    if (bytes.back() & pad_mask) throw CorruptStream("bit stream: nonzero padding bits");
  }
  BitStream s;
  s.bytes_ = std::move(bytes);
  s.bit_len_ = bit_len;
  return s;
}

std::string BitStream::to_string() const {
  std::string out;
  out.reserve(bit_len_);
  for (std::size_t i = 0; i < bit_len_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

BitStream BitStream::from_string(std::string_view bits) {
  BitStream s;
  for (char c : bits) {
    if (c == '0' || c == '1') {
      s.push_bit(c == '1');
    } else if (c != ' ' && c != '.' && c != '_') {
      throw InvalidArgument("BitStream::from_string: unexpected character");
    }
  }
  return s;
}

bool BitReader::read_bit() {
  if (pos_ >= stream_->bit_len()) throw CorruptStream("bit stream exhausted");
  return stream_->bit(pos_++);
}

std::uint64_t BitReader::read_bits(int width) {
  if (width < 0 || width > 64) throw InvalidArgument("read_bits: width must be in [0, 64]");
  if (remaining() < static_cast<std::size_t>(width)) throw CorruptStream("bit stream exhausted mid-symbol");
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 1) | (stream_->bit(pos_++) ? 1u : 0u);
  return v;
}

}  // namespace mvsgd
