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

#ifndef MVSGD_BITSTREAM_H_
#define MVSGD_BITSTREAM_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvsgd {

// Length-counted bit sequence packed most-significant-bit first. Bits past
// bit_len() in the last byte are always zero, so equality is bytewise.
class BitStream {
 public:
  void push_bit(bool bit);
  // Appends the low `width` bits of `value`, most significant first.
  void push_bits(std::uint64_t value, int width);
  void append(const BitStream& other);

  std::size_t bit_len() const noexcept { return bit_len_; }
  bool bit(std::size_t i) const;
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  // Throws CorruptStream if the byte count does not match bit_len or
  // padding bits are set.
  static BitStream from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_len);

  // "0"/"1" text form, for tests and debugging.
  std::string to_string() const;
  static BitStream from_string(std::string_view bits);

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_len_ = 0;
};

// Sequential reader; every read past the end throws CorruptStream.
class BitReader {
 public:
  explicit BitReader(const BitStream& stream) : stream_(&stream) {}

  bool read_bit();
  std::uint64_t read_bits(int width);

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return stream_->bit_len() - pos_; }
  bool at_end() const noexcept { return pos_ == stream_->bit_len(); }

 private:
  const BitStream* stream_;
  std::size_t pos_ = 0;
};

}  // namespace mvsgd

#endif  // MVSGD_BITSTREAM_H_
