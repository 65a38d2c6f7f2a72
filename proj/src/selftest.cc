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

#include "mvsgd/selftest.h"

#include <cmath>
#include <exception>
#include <vector>

#include "mvsgd/codec.h"
#include "mvsgd/rng.h"

namespace mvsgd {

namespace {

constexpr std::size_t kMaxMessages = 8;

void note(SelftestResult& r, std::string msg) {
  if (r.messages.size() < kMaxMessages) r.messages.push_back(std::move(msg));
}

bool mask_trial(Rng& rng, std::string& why) {
  const std::size_t dim = 1 + rng.below(1u << 16);
  const BlockLayout layout = rng.below(2) == 0
                                 ? BlockLayout::power_of_two(1 + static_cast<int>(rng.below(10)))
                                 : BlockLayout{2 + rng.below(1023)};
  const double density = std::pow(10.0, -3.0 * rng.uniform());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dim; ++i) {
    if (rng.uniform() < density) idx.push_back(i);
  }
  const SparseMask mask(dim, std::move(idx));
  const BitStream wire = encode_mask(mask, layout);
  if (wire.bit_len() != encoded_mask_bits(mask.size(), dim, layout)) {
    why = "mask length formula mismatch (dim " + std::to_string(dim) + ")";
    return false;
  }
  if (decode_mask(wire, dim, layout) != mask) {
    why = "mask roundtrip mismatch (dim " + std::to_string(dim) + ")";
    return false;
  }
  return true;
}

bool quant_trial(Rng& rng, std::string& why) {
  const std::size_t n = 1 + rng.below(512);
  const int q = 1 + static_cast<int>(rng.below(8));
  std::vector<double> values(n);
  for (auto& v : values) {
    if (rng.uniform() < 0.05) continue;
    v = std::pow(10.0, -6.0 * rng.uniform()) * (rng.below(2) ? -1.0 : 1.0);
  }
  values[rng.below(n)] = 0.5;  // at least one nonzero

  const QuantizedBlock block = quantize_values(values, q);
  const std::vector<double> out = dequantize(block);
  const int levels = block.levels();
  const double log_ratio = std::log(block.v_max / block.v_min);
  BitReader codes(block.codes);
  for (std::size_t i = 0; i < n; ++i) {
    const bool negative = codes.read_bit();
    const int l = static_cast<int>(codes.read_bits(q - 1)) + 1;
    if (values[i] == 0.0) continue;
    const double m = std::abs(values[i]);
    if ((values[i] < 0.0) != (out[i] < 0.0) || negative != (values[i] < 0.0)) {
      why = "sign flipped";
      return false;
    }
    const double r = std::abs(out[i]);
    if (r < block.v_min || r > block.v_max) {
      why = "reconstruction outside [v_min, v_max]";
      return false;
    }
    if (log_ratio > 0.0) {
      const double upper = block.v_max * std::exp(-(l - 1) * log_ratio / levels);
      const double lower = block.v_max * std::exp(-l * log_ratio / levels);
      const double tol = 1e-9;
      if (m > upper * (1 + tol) || m < lower * (1 - tol)) {
        why = "magnitude outside its interval";
        return false;
      }
    }
  }
  const BitStream wire = encode_quantized(block);
  if (wire.bit_len() != n * static_cast<std::size_t>(q) + static_cast<std::size_t>(levels) * kMeanBits) {
    why = "quantized wire length mismatch";
    return false;
  }
  const QuantizedBlock back = decode_quantized(wire, n, q);
  if (back.codes != block.codes) {
    why = "quantized codes changed on the wire";
    return false;
  }
  for (int l = 0; l < levels; ++l) {
    if (back.means[l] != static_cast<double>(static_cast<float>(block.means[l]))) {
      why = "means not binary32-exact after the wire";
      return false;
    }
  }
  return true;
}

}  // namespace

SelftestResult run_codec_selftest(std::size_t mask_trials,
                                  std::size_t quant_trials,
                                  std::uint64_t seed) {
  SelftestResult result;
  Rng rng(seed);
  for (std::size_t t = 0; t < mask_trials; ++t) {
    std::string why;
    bool ok = false;
    try {
      ok = mask_trial(rng, why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    ++result.mask_trials;
    if (!ok) {
      ++result.mask_failures;
      note(result, "mask trial " + std::to_string(t) + ": " + why);
    }
  }
  for (std::size_t t = 0; t < quant_trials; ++t) {
    std::string why;
    bool ok = false;
    try {
      ok = quant_trial(rng, why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    ++result.quant_trials;
    if (!ok) {
      ++result.quant_failures;
      note(result, "quantizer trial " + std::to_string(t) + ": " + why);
    }
  }
  return result;
}

}  // namespace mvsgd
