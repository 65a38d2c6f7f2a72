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

#include "mvsgd/local_sgd.h"

#include <numeric>

#include "mvsgd/errors.h"

namespace mvsgd {

BatchSampler::BatchSampler(std::size_t shard_size, std::size_t batch_size,
                           std::uint64_t seed)
    : shard_size_(shard_size), batch_size_(batch_size), rng_(seed) {
  if (shard_size < 1) throw InvalidArgument("BatchSampler: empty shard");
  if (batch_size < 1) throw InvalidArgument("BatchSampler: batch_size must be >= 1");
  order_.resize(shard_size);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  cursor_ = shard_size;  // forces a shuffle before the first partial batch
}

void BatchSampler::reshuffle() {
  rng_.shuffle(std::span<std::size_t>(order_));
  cursor_ = 0;
}

std::vector<std::size_t> BatchSampler::next_batch() {
  if (batch_size_ >= shard_size_) {
    std::vector<std::size_t> all(shard_size_);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  // Leftover rows that cannot fill a batch are skipped at the epoch end.
  if (shard_size_ - cursor_ < batch_size_) reshuffle();
  std::vector<std::size_t> batch(order_.begin() + cursor_,
                                 order_.begin() + cursor_ + batch_size_);
  cursor_ += batch_size_;
  return batch;
}

DenseVector local_steps(const Model& model, const Shard& shard, int steps,
                        double lr, BatchSampler& sampler) {
  if (steps < 1) throw InvalidArgument("local_steps: H must be >= 1");
  if (!(lr >= 0.0)) throw InvalidArgument("local_steps: lr must be >= 0");
  Model local = model;
  DenseVector delta(model.dim());
  for (int h = 0; h < steps; ++h) {
    const auto batch = sampler.next_batch();
    const DenseVector g = compute_gradient(local, shard.data, batch);
    for (std::size_t i = 0; i < g.dim(); ++i) {
      const double step = -lr * g[i];
      delta[i] += step;
      local.params[i] += step;
    }
  }
  return delta;
}

}  // namespace mvsgd
