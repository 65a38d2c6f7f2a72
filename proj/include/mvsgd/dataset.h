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

#ifndef MVSGD_DATASET_H_
#define MVSGD_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mvsgd/dense_vector.h"

namespace mvsgd {

// Row-major sample matrix with one scalar target per row.
struct Dataset {
  std::size_t input_dim = 0;
  std::vector<double> inputs;   // num_samples() * input_dim
  std::vector<double> targets;  // num_samples()

  std::size_t num_samples() const noexcept { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(inputs).subspan(i * input_dim, input_dim);
  }
  // Copies the listed rows, in the listed order.
  Dataset select(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// The portion of a dataset owned by one worker. `indices` refer to rows of
// the dataset the shard was cut from; `data` holds copies of those rows.
struct Shard {
  int owner = 0;
  std::vector<std::size_t> indices;
  Dataset data;

  friend bool operator==(const Shard&, const Shard&) = default;
};

// Gaussian inputs, targets = inputs * truth + N(0, noise_std^2).
// Deterministic for a fixed seed.
std::pair<Dataset, DenseVector> make_synthetic_regression(
    std::uint64_t seed, std::size_t n, std::size_t input_dim,
    double noise_std);

// Gaussian inputs, labels 1[inputs * truth + N(0, noise_std^2) > 0].
std::pair<Dataset, DenseVector> make_synthetic_classification(
    std::uint64_t seed, std::size_t n, std::size_t input_dim,
    double noise_std);

// Random permutation of the rows dealt round-robin to `num_workers` shards.
std::vector<Shard> shard_iid(const Dataset& dataset, std::size_t num_workers,
                             std::uint64_t seed);

// Splits off the trailing `tail` rows.
std::pair<Dataset, Dataset> split_tail(const Dataset& dataset,
                                       std::size_t tail);

}  // namespace mvsgd

#endif  // MVSGD_DATASET_H_
