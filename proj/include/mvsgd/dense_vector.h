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

#ifndef MVSGD_DENSE_VECTOR_H_
#define MVSGD_DENSE_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mvsgd {

// Flat real-valued vector of fixed dimension: parameters, gradients and
// model differences all live here.
class DenseVector {
 public:
  DenseVector() = default;
  // Zero vector of dimension `dim`.
  explicit DenseVector(std::size_t dim) : data_(dim, 0.0) {}
  // Throws InvalidArgument if any entry is not finite.
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const noexcept { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& to_vector() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;

  // Bitwise comparison of the underlying representation is what the
  // determinism checks want; operator== compares values (so +0 == -0).
  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

// a += scale * b
void axpy(double scale, const DenseVector& b, DenseVector& a);
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(const DenseVector& v);

}  // namespace mvsgd

#endif  // MVSGD_DENSE_VECTOR_H_
