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

#include "mvsgd/dense_vector.h"

#include <cmath>
#include <utility>

#include "mvsgd/errors.h"

namespace mvsgd {

DenseVector::DenseVector(std::vector<double> values)
    : data_(std::move(values)) {
  if (!all_finite()) throw InvalidArgument("DenseVector: non-finite entry");
}

bool DenseVector::all_finite() const noexcept {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void axpy(double scale, const DenseVector& b, DenseVector& a) {
  if (a.dim() != b.dim()) throw InvalidArgument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i) a[i] += scale * b[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const DenseVector& v) {
  return dot(v.values(), v.values());
}

}  // namespace mvsgd
