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

#include "mvsgd/sparsify.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "mvsgd/errors.h"

namespace mvsgd {

SparseMask::SparseMask(std::size_t dim, std::vector<std::size_t> indices)
    : dim_(dim), indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= dim_) throw InvalidArgument("SparseMask: index out of range");
    if (k > 0 && indices_[k] <= indices_[k - 1]) {
      throw InvalidArgument("SparseMask: indices must be strictly increasing");
    }
  }
}

SparseMask SparseMask::full(std::size_t dim) {
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return SparseMask(dim, std::move(all));
}

SparseMask SparseMask::from_unsorted(std::size_t dim,
                                     std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return SparseMask(dim, std::move(indices));
}

bool SparseMask::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

namespace {

void require_same_dim(const SparseMask& a, const SparseMask& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("mask dimension mismatch");
}

}  // namespace

SparseMask mask_union(const SparseMask& a, const SparseMask& b) {
  require_same_dim(a, b);
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(),
                 b.indices().end(), std::back_inserter(out));
  return SparseMask(a.dim(), std::move(out));
}

SparseMask mask_difference(const SparseMask& a, const SparseMask& b) {
  require_same_dim(a, b);
  std::vector<std::size_t> out;
  std::set_difference(a.indices().begin(), a.indices().end(),
                      b.indices().begin(), b.indices().end(),
                      std::back_inserter(out));
  return SparseMask(a.dim(), std::move(out));
}

std::size_t symmetric_difference_size(const SparseMask& a, const SparseMask& b) {
  require_same_dim(a, b);
  std::size_t n = 0;
  auto i = a.indices().begin(), j = b.indices().begin();
  while (i != a.indices().end() && j != b.indices().end()) {
    if (*i == *j) {
      ++i, ++j;
    } else if (*i < *j) {
      ++n, ++i;
    } else {
      ++n, ++j;
    }
  }
  return n + static_cast<std::size_t>(std::distance(i, a.indices().end())) +
         static_cast<std::size_t>(std::distance(j, b.indices().end()));
}

bool is_subset(const SparseMask& sub, const SparseMask& super) {
  return sub.dim() == super.dim() &&
         std::includes(super.indices().begin(), super.indices().end(),
                       sub.indices().begin(), sub.indices().end());
}

DenseVector densify(const SparseUpdate& update) {
  if (update.values.size() != update.mask.size()) {
    throw InvalidArgument("densify: values do not match mask cardinality");
  }
  DenseVector out(update.mask.dim());
  const auto& idx = update.mask.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = update.values[k];
  return out;
}

SparseMask top_k_mask(const DenseVector& v, std::size_t k) {
  if (k < 1 || k > v.dim()) throw InvalidArgument("top_k_mask: K out of range");
  std::vector<std::size_t> all(v.dim());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto better = [&v](std::size_t a, std::size_t b) {
    const double x = std::abs(v[a]), y = std::abs(v[b]);
    return x > y || (x == y && a < b);
  };
  return SparseMask(v.dim(), detail::select_best(all, k, better));
}

SparseMask bottom_k_mask(const DenseVector& v, std::size_t k,
                         const SparseMask& support) {
  if (support.dim() != v.dim()) throw InvalidArgument("bottom_k_mask: dimension mismatch");
  if (k > support.size()) throw InvalidArgument("bottom_k_mask: K exceeds support size");
  auto better = [&v](std::size_t a, std::size_t b) {
    const double x = std::abs(v[a]), y = std::abs(v[b]);
    return x < y || (x == y && a < b);
  };
  return SparseMask(v.dim(), detail::select_best(support.indices(), k, better));
}

SparseUpdate apply_mask(const DenseVector& v, const SparseMask& mask) {
  if (mask.dim() != v.dim()) throw InvalidArgument("apply_mask: dimension mismatch");
  SparseUpdate out{mask, {}};
  out.values.reserve(mask.size());
  for (std::size_t i : mask.indices()) out.values.push_back(v[i]);
  return out;
}

DenseVector accumulate(const DenseVector& delta, const ErrorAccumulator& acc) {
  if (delta.dim() != acc.residual.dim()) throw InvalidArgument("accumulate: dimension mismatch");
  DenseVector out = delta;
  for (std::size_t i = 0; i < out.dim(); ++i) out[i] += acc.residual[i];
  return out;
}

DenseVector residual(const DenseVector& accumulated, const SparseUpdate& sent) {
  if (sent.mask.dim() != accumulated.dim()) throw InvalidArgument("residual: dimension mismatch");
  if (sent.values.size() != sent.mask.size()) {
    throw InvalidArgument("residual: values do not match mask cardinality");
  }
  DenseVector out = accumulated;
  const auto& idx = sent.mask.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = accumulated[idx[k]] - sent.values[k];
  return out;
}

}  // namespace mvsgd
