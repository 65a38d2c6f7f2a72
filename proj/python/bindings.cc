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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "mvsgd/accounting.h"
#include "mvsgd/codec.h"
#include "mvsgd/config.h"
#include "mvsgd/errors.h"
#include "mvsgd/experiment.h"
#include "mvsgd/selftest.h"
#include "mvsgd/sparsify.h"
#include "mvsgd/voting.h"

namespace py = pybind11;

namespace {

py::dict budget_dict(const mvsgd::Budget& b) {
  py::dict d;
  d["up_loc"] = b.up_loc;
  d["up_val"] = b.up_val;
  d["down_loc"] = b.down_loc;
  d["down_val"] = b.down_val;
  d["compression_up"] = b.compression_up();
  d["compression_down"] = b.compression_down();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Majority-vote sparse distributed SGD simulator";

  py::register_exception<mvsgd::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<mvsgd::CorruptStream>(m, "CorruptStream", PyExc_ValueError);
  py::register_exception<mvsgd::ProtocolViolation>(m, "ProtocolViolation",
                                                   PyExc_RuntimeError);

  m.def("top_k", [](const std::vector<double>& v, std::size_t k) {
    return mvsgd::top_k_mask(mvsgd::DenseVector(v), k).indices();
  });

  m.def("majority_vote",
        [](std::size_t dim, const std::vector<std::vector<std::size_t>>& votes, std::size_t k) {
          std::vector<mvsgd::SparseMask> masks;
          masks.reserve(votes.size());
          for (const auto& v : votes) masks.push_back(mvsgd::SparseMask::from_unsorted(dim, v));
          return mvsgd::select_topk_mask(mvsgd::tally_votes(masks), k).indices();
        });

  m.def(
      "encode_mask",
      [](std::size_t dim, std::vector<std::size_t> indices, std::size_t block_size) {
        return mvsgd::encode_mask(mvsgd::SparseMask(dim, std::move(indices)),
                                  mvsgd::BlockLayout{block_size})
            .to_string();
      },
      py::arg("dim"), py::arg("indices"), py::arg("block_size"),
      "Block position code as a '0'/'1' string.");
  m.def(
      "decode_mask",
      [](const std::string& bits, std::size_t dim, std::size_t block_size) {
        return mvsgd::decode_mask(mvsgd::BitStream::from_string(bits), dim,
                                  mvsgd::BlockLayout{block_size})
            .indices();
      },
      py::arg("bits"), py::arg("dim"), py::arg("block_size"));

  m.def(
      "quantize_roundtrip",
      [](const std::vector<double>& values, int q) {
        return mvsgd::dequantize(mvsgd::quantize_values(values, q));
      },
      py::arg("values"), py::arg("q"));

  m.def(
      "analytic_budget",
      [](const std::string& scheme, double phi, double phi_ad, int q, int H, int N) {
        return budget_dict(
            mvsgd::analytic_budget(mvsgd::parse_scheme(scheme), phi, phi_ad, q, H, N));
      },
      py::arg("scheme"), py::arg("phi"), py::arg("phi_ad") = 1e-3, py::arg("q") = 32,
      py::arg("local_steps") = 1, py::arg("workers") = 10);

  m.def("table", []() {
    py::list rows;
    for (const auto& row : mvsgd::render_table()) {
      py::dict d = budget_dict(row.budget);
      d["method"] = row.method;
      d["scheme"] = std::string(mvsgd::to_string(row.scheme));
      d["local_steps"] = row.local_steps;
      d["q"] = row.q;
      d["note"] = row.note;
      rows.append(d);
    }
    return rows;
  });

  m.def(
      "codec_selftest",
      [](std::size_t mask_trials, std::size_t quant_trials, std::uint64_t seed) {
        return mvsgd::run_codec_selftest(mask_trials, quant_trials, seed).ok();
      },
      py::arg("mask_trials") = 1000, py::arg("quant_trials") = 100, py::arg("seed") = 1);

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const mvsgd::ExperimentConfig config = mvsgd::parse_config(config_text);
        mvsgd::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = mvsgd::run_experiment(config);
        }
        py::dict out;
        out["csv"] = mvsgd::reports_to_csv(result.reports);
        out["summary"] = mvsgd::summary_to_json(config, result.summary);
        return out;
      },
      py::arg("config_text"),
      "Runs a config given as key = value text; returns the CSV and summary JSON text.");
}
