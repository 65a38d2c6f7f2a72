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

#ifndef MVSGD_CONFIG_H_
#define MVSGD_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mvsgd/lr_schedule.h"
#include "mvsgd/model.h"
#include "mvsgd/protocol.h"

namespace mvsgd {

inline constexpr int kConfigSchemaVersion = 1;

// Everything needed to reproduce one run. The text form is one
// `key = value` pair per line; '#' starts a comment. schema_version is
// mandatory and unknown or repeated keys are rejected.
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::uint64_t seed = 1;
  std::size_t workers = 4;

  ModelKind model = ModelKind::kLinearRegression;
  std::size_t input_dim = 256;
  std::size_t hidden_width = 0;
  double weight_decay = kDefaultWeightDecay;

  std::size_t train_samples = 1024;
  std::size_t eval_samples = 256;
  double noise_std = 0.1;
  std::size_t batch_size = 32;

  Scheme scheme = Scheme::kMv;
  double phi = 1e-2;
  double phi_ad = 1e-3;
  int local_steps = 1;
  int quantize_bits = 0;  // 0: binary32 values on the uplink
  bool error_feedback = true;
  bool quantization_feedback = false;

  std::int64_t rounds = 100;
  LrSchedule lr{0.1, 0, 0.1, {}};
  bool uncompressed_warmup = true;

  std::string output;  // path prefix for <output>.csv and <output>.summary.json

  std::size_t model_dim() const;
  // round(phi * d) and round(phi_ad * d).
  std::size_t k() const;
  std::size_t k_ad() const;

  // Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& config);
// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace mvsgd

#endif  // MVSGD_CONFIG_H_
