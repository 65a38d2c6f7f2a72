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

#include "mvsgd/dataset.h"

#include <numeric>

#include "mvsgd/errors.h"
#include "mvsgd/rng.h"

namespace mvsgd {

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  Dataset out;
  out.input_dim = input_dim;
  out.inputs.reserve(rows.size() * input_dim);
  out.targets.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= num_samples()) throw InvalidArgument("Dataset::select: row out of range");
    const auto x = row(r);
    out.inputs.insert(out.inputs.end(), x.begin(), x.end());
    out.targets.push_back(targets[r]);
  }
  return out;
}

namespace {

// Shared generator for both synthetic tasks: Gaussian design, Gaussian
// truth, and the noisy linear response.
std::pair<Dataset, DenseVector> make_linear_response(std::uint64_t seed,
                                                     std::size_t n,
                                                     std::size_t input_dim,
                                                     double noise_std,
                                                     std::vector<double>& response) {
  if (n < 1) throw InvalidArgument("synthetic dataset: n must be >= 1");
  if (input_dim < 1) throw InvalidArgument("synthetic dataset: input_dim must be >= 1");
  if (!(noise_std >= 0.0)) throw InvalidArgument("synthetic dataset: noise_std must be >= 0");

  Rng truth_rng(mix_seed(seed, 0));
  Rng input_rng(mix_seed(seed, 1));
  Rng noise_rng(mix_seed(seed, 2));

  std::vector<double> truth(input_dim);
  for (double& w : truth) w = truth_rng.normal();

  Dataset data;
  data.input_dim = input_dim;
  data.inputs.resize(n * input_dim);
  for (double& x : data.inputs) x = input_rng.normal();

  response.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    response[i] = dot(data.row(i), truth);
    if (noise_std > 0.0) response[i] += noise_std * noise_rng.normal();
  }
  return {std::move(data), DenseVector(std::move(truth))};
}

}  // namespace

std::pair<Dataset, DenseVector> make_synthetic_regression(
    std::uint64_t seed, std::size_t n, std::size_t input_dim,
    double noise_std) {
  std::vector<double> response;
  auto [data, truth] = make_linear_response(seed, n, input_dim, noise_std, response);
  data.targets = std::move(response);
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset, DenseVector> make_synthetic_classification(
    std::uint64_t seed, std::size_t n, std::size_t input_dim,
    double noise_std) {
  std::vector<double> response;
  auto [data, truth] = make_linear_response(seed, n, input_dim, noise_std, response);
  data.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.targets[i] = response[i] > 0.0 ? 1.0 : 0.0;
  return {std::move(data), std::move(truth)};
}

std::vector<Shard> shard_iid(const Dataset& dataset, std::size_t num_workers,
                             std::uint64_t seed) {
  const std::size_t n = dataset.num_samples();
  if (num_workers < 1) throw InvalidArgument("shard_iid: need at least one worker");
  if (num_workers > n) throw InvalidArgument("shard_iid: more workers than samples");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));

  std::vector<Shard> shards(num_workers);
  for (std::size_t w = 0; w < num_workers; ++w) shards[w].owner = static_cast<int>(w);
  for (std::size_t i = 0; i < n; ++i) shards[i % num_workers].indices.push_back(perm[i]);
  for (auto& s : shards) s.data = dataset.select(s.indices);
  return shards;
}

std::pair<Dataset, Dataset> split_tail(const Dataset& dataset,
                                       std::size_t tail) {
  const std::size_t n = dataset.num_samples();
  if (tail > n) throw InvalidArgument("split_tail: tail larger than dataset");
  std::vector<std::size_t> head_rows(n - tail), tail_rows(tail);
  std::iota(head_rows.begin(), head_rows.end(), std::size_t{0});
  std::iota(tail_rows.begin(), tail_rows.end(), n - tail);
  return {dataset.select(head_rows), dataset.select(tail_rows)};
}

}  // namespace mvsgd
