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

#ifndef MVSGD_EXPERIMENT_H_
#define MVSGD_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvsgd/config.h"
#include "mvsgd/protocol.h"

namespace mvsgd {

struct Cluster {
  ServerState server;
  std::vector<WorkerState> workers;
};

// Synthetic data, IID shards, initial model and per-worker generators, all
// derived from config.seed.
Cluster build_cluster(const ExperimentConfig& config);

RoundConfig make_round_config(const ExperimentConfig& config,
                              std::int64_t round);

struct Summary {
  std::int64_t rounds = 0;
  std::int64_t uncompressed_rounds = 0;
  double final_train_loss = 0.0;
  double final_eval_loss = 0.0;
  RoundBits total_bits;
  RoundBits compressed_bits;  // rounds after warmup only
  // 32 * d * H * rounds over per-worker bits, means overhead excluded and
  // included respectively.
  double compression_up = 0.0;
  double compression_down = 0.0;
  double compression_up_with_overhead = 0.0;
  double compression_down_with_overhead = 0.0;
  // Same ratios restricted to compressed rounds (0 when there are none).
  double compressed_phase_compression_up = 0.0;
  double compressed_phase_compression_down = 0.0;
};

struct ExperimentResult {
  // Uncompressed rounds keep an empty mask instead of the full index set.
  std::vector<RoundReport> reports;
  CommLedger ledger;
  Summary summary;
  Model final_model;
};

// Runs every round. When config.output is set, writes <output>.csv (one row
// per round) and <output>.summary.json; the files are opened before the
// first round so an unwritable path fails fast with IoError.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string reports_to_csv(const std::vector<RoundReport>& reports);
std::string summary_to_json(const ExperimentConfig& config, const Summary& summary);

}  // namespace mvsgd

#endif  // MVSGD_EXPERIMENT_H_
