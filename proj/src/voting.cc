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

#include "mvsgd/voting.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "mvsgd/errors.h"

namespace mvsgd {

std::int64_t VoteCount::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

VoteCount tally_votes(std::span<const SparseMask> masks) {
  if (masks.empty()) return VoteCount();
  VoteCount out(masks.front().dim());
  for (const auto& m : masks) {
    if (m.dim() != out.dim) throw InvalidArgument("tally_votes: mask dimension mismatch");
    for (std::size_t i : m.indices()) ++out.counts[i];
  }
  return out;
}

SparseMask select_topk_mask(const VoteCount& counts, std::size_t k) {
  if (k < 1 || k > counts.dim) throw InvalidArgument("select_topk_mask: K out of range");
  std::vector<std::size_t> all(counts.dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto better = [&c = counts.counts](std::size_t a, std::size_t b) {
    return c[a] > c[b] || (c[a] == c[b] && a < b);
  };
  return SparseMask(counts.dim, detail::select_best(all, k, better));
}

SparseMask select_random_weighted(const VoteCount& counts, std::size_t k,
                                  Rng& rng) {
  std::vector<std::size_t> voted;
  for (std::size_t i = 0; i < counts.dim; ++i) {
    if (counts.counts[i] > 0) voted.push_back(i);
  }
  if (voted.empty()) throw InvalidArgument("select_random_weighted: no positive votes");
  // One draw per voted coordinate, in index order, regardless of k.
  std::vector<double> key(counts.dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i : voted) {
    key[i] = std::log(rng.uniform_open_closed()) / static_cast<double>(counts.counts[i]);
  }
  auto better = [&key](std::size_t a, std::size_t b) {
    return key[a] > key[b] || (key[a] == key[b] && a < b);
  };
  return SparseMask(counts.dim, detail::select_best(voted, k, better));
}

AddDrop ad_propose(const SparseMask& prev_vote, const SparseMask& cur_topk,
                   const DenseVector& accumulated, std::size_t k_ad) {
  if (prev_vote.size() != cur_topk.size()) {
    throw InvalidArgument("ad_propose: previous and current votes differ in cardinality");
  }
  if (prev_vote.dim() != cur_topk.dim() || prev_vote.dim() != accumulated.dim()) {
    throw InvalidArgument("ad_propose: dimension mismatch");
  }
  const SparseMask entering = mask_difference(cur_topk, prev_vote);
  const SparseMask leaving = mask_difference(prev_vote, cur_topk);
  const std::size_t m = std::min(k_ad, entering.size());

  auto larger = [&accumulated](std::size_t a, std::size_t b) {
    const double x = std::abs(accumulated[a]), y = std::abs(accumulated[b]);
    return x > y || (x == y && a < b);
  };
  AddDrop out;
  out.adds = SparseMask(accumulated.dim(), detail::select_best(entering.indices(), m, larger));
  out.drops = bottom_k_mask(accumulated, m, leaving);
  return out;
}

SparseMask apply_add_drop(const SparseMask& prev_vote, const AddDrop& change) {
  return mask_difference(mask_union(prev_vote, change.adds), change.drops);
}

VoteCount ad_apply(VoteCount sum, std::span<const AddDrop> changes) {
  for (const auto& c : changes) {
    if (c.adds.dim() != sum.dim || c.drops.dim() != sum.dim) {
      throw InvalidArgument("ad_apply: dimension mismatch");
    }
    for (std::size_t i : c.adds.indices()) ++sum.counts[i];
    for (std::size_t i : c.drops.indices()) {
      if (sum.counts[i] < 1) throw ProtocolViolation("ad_apply: vote count would drop below zero");
      --sum.counts[i];
    }
  }
  return sum;
}

}  // namespace mvsgd
