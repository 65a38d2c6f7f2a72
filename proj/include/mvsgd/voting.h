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

#ifndef MVSGD_VOTING_H_
#define MVSGD_VOTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvsgd/dense_vector.h"
#include "mvsgd/rng.h"
#include "mvsgd/sparsify.h"

namespace mvsgd {

// Per-coordinate vote totals held by the server.
struct VoteCount {
  std::size_t dim = 0;
  std::vector<std::int64_t> counts;

  VoteCount() = default;
  explicit VoteCount(std::size_t d) : dim(d), counts(d, 0) {}

  std::int64_t total() const;

  friend bool operator==(const VoteCount&, const VoteCount&) = default;
};

// One worker's incremental vote change. adds and drops are disjoint and of
// equal size, so the vote keeps its cardinality.
struct AddDrop {
  SparseMask adds;
  SparseMask drops;

  friend bool operator==(const AddDrop&, const AddDrop&) = default;
};

// counts[i] = number of masks containing i.
VoteCount tally_votes(std::span<const SparseMask> masks);

// K most-voted coordinates; ties go to the lower index.
SparseMask select_topk_mask(const VoteCount& counts, std::size_t k);

// K distinct coordinates drawn without replacement, each draw proportional
// to the vote counts of the coordinates not yet drawn. Returns every
// positively voted coordinate when fewer than K exist.
//
// Sampling uses exponential keys log(u)/w (Efraimidis-Spirakis), which has
// exactly the successive-draw distribution above.
SparseMask select_random_weighted(const VoteCount& counts, std::size_t k,
                                  Rng& rng);

// Worker-side add-drop step. With m = min(k_ad, |cur \ prev|): adds are the
// m largest |accumulated| in cur \ prev, drops the m smallest in prev \ cur.
AddDrop ad_propose(const SparseMask& prev_vote, const SparseMask& cur_topk,
                   const DenseVector& accumulated, std::size_t k_ad);

// prev_vote + adds - drops.
SparseMask apply_add_drop(const SparseMask& prev_vote, const AddDrop& change);

// Server-side cumulative vote update. Throws ProtocolViolation if a drop
// would take a count below zero.
VoteCount ad_apply(VoteCount sum, std::span<const AddDrop> changes);

}  // namespace mvsgd

#endif  // MVSGD_VOTING_H_
