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

#ifndef MVSGD_PROTOCOL_H_
#define MVSGD_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvsgd/codec.h"
#include "mvsgd/dataset.h"
#include "mvsgd/local_sgd.h"
#include "mvsgd/model.h"
#include "mvsgd/rng.h"
#include "mvsgd/sparsify.h"
#include "mvsgd/voting.h"

namespace mvsgd {

enum class Scheme {
  kBaselineDsgd,  // dense exchange every round
  kTopkLocal,     // each worker sends its own top-K; server returns the union
  kMv,            // majority vote, top-K of the tally
  kMvRs,          // majority vote, vote-weighted random selection
  kMvAd,          // majority vote with incremental add-drop votes
};

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

// Bits moved in one round, summed over all N links in each direction. A
// broadcast counts once per receiving worker.
struct RoundBits {
  std::uint64_t up_loc = 0;
  std::uint64_t up_val = 0;
  std::uint64_t up_overhead = 0;
  std::uint64_t down_loc = 0;
  std::uint64_t down_val = 0;
  std::uint64_t down_overhead = 0;

  std::uint64_t up_total() const { return up_loc + up_val + up_overhead; }
  std::uint64_t down_total() const { return down_loc + down_val + down_overhead; }

  RoundBits& operator+=(const RoundBits& o);
  friend bool operator==(const RoundBits&, const RoundBits&) = default;
};

struct CommLedger {
  std::vector<RoundBits> rounds;
  std::vector<bool> compressed;  // false for uncompressed warmup rounds

  void record(const RoundBits& bits, bool was_compressed);
  RoundBits totals() const;
  RoundBits totals(bool was_compressed) const;

  friend bool operator==(const CommLedger&, const CommLedger&) = default;
};

struct WorkerState {
  int id = 0;
  Model model;
  Shard shard;
  ErrorAccumulator error;
  // Last vote sent; for MV-AD this is the running add-drop vote.
  std::optional<SparseMask> prev_vote;
  BatchSampler sampler;
};

struct ServerState {
  Model model;
  Scheme scheme = Scheme::kMv;
  std::optional<int> quantize;         // uplink value bits; nullopt = binary32
  std::optional<VoteCount> vote_sum;   // MV-AD cumulative votes
  std::optional<SparseMask> prev_mask; // last consensus mask
  Rng rng;                             // MV-RS selection
  std::optional<Dataset> eval_set;
};

struct RoundConfig {
  std::int64_t round = 0;
  std::size_t k = 1;
  std::size_t k_ad = 1;
  int local_steps = 1;
  double lr = 0.1;
  bool error_feedback = true;
  // Feed the uplink reconstruction error (quantization, binary32 rounding)
  // back into the residual as well as the sparsification error.
  bool quantization_feedback = false;
  // false during warmup: dense exchange whatever the scheme.
  bool compressed = true;
  BlockLayout mask_layout;   // votes, consensus masks
  BlockLayout ad_layout;     // MV-AD add/drop lists
  BlockLayout union_layout;  // top-K-local downlink
};

struct RoundReport {
  std::int64_t round = 0;
  double train_loss = 0.0;
  double eval_loss = 0.0;  // NaN without an eval set
  std::size_t mask_churn = 0;
  RoundBits bits;
  bool compressed = true;
  SparseMask mask;                      // mask applied to the model
  std::vector<std::size_t> vote_churn;  // per worker, |vote_t xor vote_t-1|
};

// Executes one synchronous round and credits every encoded bit to `ledger`.
// Workers are processed and their messages applied in ascending id order.
RoundReport run_round(ServerState& server, std::vector<WorkerState>& workers,
                      const RoundConfig& cfg, CommLedger& ledger);

// Mean of updates that all share one mask. Throws ProtocolViolation on a
// mask mismatch.
SparseUpdate server_aggregate(std::span<const SparseUpdate> updates,
                              std::size_t num_workers);

// Mean over the union of the update supports.
SparseUpdate aggregate_union(std::span<const SparseUpdate> updates,
                             std::size_t num_workers);

// Adds `update` at its masked coordinates; all others are left untouched.
Model apply_update(Model model, const SparseUpdate& update);

std::string csv_header();
std::string to_csv_row(const RoundReport& report);

}  // namespace mvsgd

#endif  // MVSGD_PROTOCOL_H_
