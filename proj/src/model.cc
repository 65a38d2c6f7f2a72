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

#include "mvsgd/model.h"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mvsgd/errors.h"
#include "mvsgd/rng.h"

namespace mvsgd {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinearRegression: return "linear-regression";
    case ModelKind::kLogisticRegression: return "logistic-regression";
    case ModelKind::kMlp1Hidden: return "mlp-1hidden";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear-regression") return ModelKind::kLinearRegression;
  if (name == "logistic-regression") return ModelKind::kLogisticRegression;
  if (name == "mlp-1hidden") return ModelKind::kMlp1Hidden;
  throw InvalidArgument("unknown model kind '" + std::string(name) + "'");
}

std::size_t parameter_count(ModelKind kind, const ModelShape& shape) {
  if (shape.input_dim < 1) throw InvalidArgument("model: input_dim must be >= 1");
  if (shape.output_dim != 1) throw InvalidArgument("model: output_dim must be 1");
  switch (kind) {
    case ModelKind::kLinearRegression:
    case ModelKind::kLogisticRegression:
      return shape.input_dim;
    case ModelKind::kMlp1Hidden:
      if (shape.hidden_width < 1) throw InvalidArgument("model: mlp needs hidden_width >= 1");
      return shape.hidden_width * (shape.input_dim + 2) + 1;
  }
  throw InvalidArgument("model: unknown kind");
}

Model make_model(ModelKind kind, const ModelShape& shape, std::uint64_t seed,
                 double weight_decay) {
  if (!(weight_decay >= 0.0)) throw InvalidArgument("model: weight_decay must be >= 0");
  Model m;
  m.kind = kind;
  m.shape = shape;
  m.weight_decay = weight_decay;
  m.params = DenseVector(parameter_count(kind, shape));
  if (kind == ModelKind::kMlp1Hidden) {
    Rng rng(seed);
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(shape.input_dim));
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(shape.hidden_width));
    const std::size_t w1 = shape.hidden_width * shape.input_dim;
    for (std::size_t i = 0; i < w1; ++i) m.params[i] = in_scale * rng.normal();
    const std::size_t w2 = w1 + shape.hidden_width;
    for (std::size_t j = 0; j < shape.hidden_width; ++j) m.params[w2 + j] = out_scale * rng.normal();
  }
  return m;
}

namespace {

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_data(const Model& model, const Dataset& data) {
  if (data.input_dim != model.shape.input_dim) {
    throw InvalidArgument("model/data input dimension mismatch");
  }
  if (model.params.dim() != parameter_count(model.kind, model.shape)) {
    throw InvalidArgument("model parameter count does not match its shape");
  }
}

// Views into the mlp parameter layout.
struct MlpView {
  std::size_t in, hidden;
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return hidden * in; }
  std::size_t w2() const { return hidden * in + hidden; }
  std::size_t b2() const { return hidden * in + 2 * hidden; }
};

// Forward pass; fills `h` with the hidden activations and returns the
// output.
double mlp_forward(const Model& model, std::span<const double> x,
                   std::vector<double>& h) {
  const MlpView v{model.shape.input_dim, model.shape.hidden_width};
  const auto p = model.params.values();
  h.resize(v.hidden);
  double out = p[v.b2()];
  for (std::size_t j = 0; j < v.hidden; ++j) {
    const double pre = dot(p.subspan(v.w1() + j * v.in, v.in), x) + p[v.b1() + j];
    h[j] = std::tanh(pre);
    out += p[v.w2() + j] * h[j];
  }
  return out;
}

double sample_loss(const Model& model, std::span<const double> x, double y,
                   std::vector<double>& scratch) {
  switch (model.kind) {
    case ModelKind::kLinearRegression: {
      const double r = dot(model.params.values(), x) - y;
      return r * r;
    }
    case ModelKind::kLogisticRegression: {
      const double z = dot(model.params.values(), x);
      return softplus(z) - y * z;
    }
    case ModelKind::kMlp1Hidden: {
      const double r = mlp_forward(model, x, scratch) - y;
      return r * r;
    }
  }
  return 0.0;
}

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.num_samples());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

double data_loss_sum(const Model& model, const Dataset& data,
                     std::span<const std::size_t> rows) {
  check_data(model, data);
  std::vector<double> scratch;
  double total = 0.0;
  for (std::size_t r : rows) total += sample_loss(model, data.row(r), data.targets[r], scratch);
  return total;
}

double data_loss_sum(const Model& model, const Dataset& data) {
  return data_loss_sum(model, data, all_rows(data));
}

double regularizer(const Model& model) {
  return 0.5 * model.weight_decay * squared_norm(model.params);
}

double loss(const Model& model, const Dataset& data,
            std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidArgument("loss: empty batch");
  return data_loss_sum(model, data, rows) / static_cast<double>(rows.size()) +
         regularizer(model);
}

double loss(const Model& model, const Dataset& data) {
  return loss(model, data, all_rows(data));
}

DenseVector compute_gradient(const Model& model, const Dataset& data,
                             std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidArgument("compute_gradient: empty batch");
  check_data(model, data);
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  const auto p = model.params.values();
  DenseVector g(model.dim());

  switch (model.kind) {
    case ModelKind::kLinearRegression:
    case ModelKind::kLogisticRegression: {
      const bool linear = model.kind == ModelKind::kLinearRegression;
      for (std::size_t r : rows) {
        const auto x = data.row(r);
        const double z = dot(p, x);
        const double dz = linear ? 2.0 * (z - data.targets[r]) : sigmoid(z) - data.targets[r];
        for (std::size_t i = 0; i < x.size(); ++i) g[i] += dz * x[i];
      }
      break;
    }
    case ModelKind::kMlp1Hidden: {
      const MlpView v{model.shape.input_dim, model.shape.hidden_width};
      std::vector<double> h;
      for (std::size_t r : rows) {
        const auto x = data.row(r);
        const double dout = 2.0 * (mlp_forward(model, x, h) - data.targets[r]);
        g[v.b2()] += dout;
        for (std::size_t j = 0; j < v.hidden; ++j) {
          g[v.w2() + j] += dout * h[j];
          const double dpre = dout * p[v.w2() + j] * (1.0 - h[j] * h[j]);
          g[v.b1() + j] += dpre;
          const std::size_t base = v.w1() + j * v.in;
          for (std::size_t i = 0; i < v.in; ++i) g[base + i] += dpre * x[i];
        }
      }
      break;
    }
  }

  for (std::size_t i = 0; i < g.dim(); ++i) g[i] = g[i] * inv_b + model.weight_decay * p[i];
  return g;
}

DenseVector compute_gradient(const Model& model, const Dataset& data) {
  return compute_gradient(model, data, all_rows(data));
}

}  // namespace mvsgd
