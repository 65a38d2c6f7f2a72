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

#ifndef MVSGD_MODEL_H_
#define MVSGD_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "mvsgd/dataset.h"
#include "mvsgd/dense_vector.h"

namespace mvsgd {

enum class ModelKind { kLinearRegression, kLogisticRegression, kMlp1Hidden };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ModelShape {
  std::size_t input_dim = 1;
  std::size_t hidden_width = 0;  // mlp-1hidden only
  std::size_t output_dim = 1;    // all kinds predict one scalar

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

inline constexpr double kDefaultWeightDecay = 1e-4;

// A differentiable model viewed as an opaque parameter vector.
//
// Layouts:
//   linear / logistic: w[input_dim]
//   mlp-1hidden:       W1[hidden][input] | b1[hidden] | w2[hidden] | b2
// The mlp uses tanh hidden units and a linear scalar output.
struct Model {
  ModelKind kind = ModelKind::kLinearRegression;
  ModelShape shape;
  DenseVector params;
  double weight_decay = kDefaultWeightDecay;

  std::size_t dim() const noexcept { return params.dim(); }

  friend bool operator==(const Model&, const Model&) = default;
};

std::size_t parameter_count(ModelKind kind, const ModelShape& shape);

// Zero parameters for the linear kinds; the mlp draws small Gaussian
// weights from `seed` (zero init would leave hidden units symmetric).
Model make_model(ModelKind kind, const ModelShape& shape,
                 std::uint64_t seed = 0,
                 double weight_decay = kDefaultWeightDecay);

// Sum of per-sample losses over `rows` (no regularizer).
double data_loss_sum(const Model& model, const Dataset& data,
                     std::span<const std::size_t> rows);
double data_loss_sum(const Model& model, const Dataset& data);

// (weight_decay / 2) * |params|^2
double regularizer(const Model& model);

// Mean per-sample loss plus the regularizer; the objective whose gradient
// compute_gradient returns.
double loss(const Model& model, const Dataset& data,
            std::span<const std::size_t> rows);
double loss(const Model& model, const Dataset& data);

// Gradient of loss() over the batch. For linear regression this is
// (2/|batch|) X^T (X theta - y) + weight_decay * theta.
DenseVector compute_gradient(const Model& model, const Dataset& data,
                             std::span<const std::size_t> rows);
DenseVector compute_gradient(const Model& model, const Dataset& data);

}  // namespace mvsgd

#endif  // MVSGD_MODEL_H_
