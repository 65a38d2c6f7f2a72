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

#ifndef MVSGD_SPARSIFY_H_
#define MVSGD_SPARSIFY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "mvsgd/dense_vector.h"

namespace mvsgd {

// Sorted, duplicate-free set of coordinates in [0, dim): the support of a
// 0/1 sparsity mask.
class SparseMask {
 public:
  SparseMask() = default;
  // Throws InvalidArgument unless `indices` is strictly increasing and
  // every entry is < dim.
  SparseMask(std::size_t dim, std::vector<std::size_t> indices);

  static SparseMask full(std::size_t dim);
  static SparseMask empty(std::size_t dim) { return SparseMask(dim, {}); }
  // Sorts and deduplicates first.
  static SparseMask from_unsorted(std::size_t dim, std::vector<std::size_t> indices);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool contains(std::size_t i) const;

  friend bool operator==(const SparseMask&, const SparseMask&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> indices_;
};

SparseMask mask_union(const SparseMask& a, const SparseMask& b);
SparseMask mask_difference(const SparseMask& a, const SparseMask& b);
std::size_t symmetric_difference_size(const SparseMask& a, const SparseMask& b);
bool is_subset(const SparseMask& sub, const SparseMask& super);

// Values of a vector at the positions of a mask; what actually travels.
struct SparseUpdate {
  SparseMask mask;
  std::vector<double> values;  // aligned with mask.indices()

  friend bool operator==(const SparseUpdate&, const SparseUpdate&) = default;
};

DenseVector densify(const SparseUpdate& update);

// Per-worker residual of untransmitted update mass.
struct ErrorAccumulator {
  DenseVector residual;

  ErrorAccumulator() = default;
  explicit ErrorAccumulator(std::size_t dim) : residual(dim) {}
};

// K coordinates of largest |v|; ties go to the lower index.
SparseMask top_k_mask(const DenseVector& v, std::size_t k);

// K coordinates of `support` with smallest |v|; ties go to the lower index.
SparseMask bottom_k_mask(const DenseVector& v, std::size_t k,
                         const SparseMask& support);

SparseUpdate apply_mask(const DenseVector& v, const SparseMask& mask);

// delta + acc.residual
DenseVector accumulate(const DenseVector& delta, const ErrorAccumulator& acc);

// accumulated - densify(sent). When `sent` carries the unmodified masked
// values this zeroes the masked positions; when it carries the values the
// receiver reconstructed, the masked positions keep the reconstruction error.
DenseVector residual(const DenseVector& accumulated, const SparseUpdate& sent);

namespace detail {

// The k best of `candidates` under the strict weak order `better`, sorted
// ascending.
template <typename Better>
std::vector<std::size_t> select_best(std::span<const std::size_t> candidates,
                                     std::size_t k, Better better);

}  // namespace detail

}  // namespace mvsgd

#include "mvsgd/sparsify_inl.h"

#endif  // MVSGD_SPARSIFY_H_
