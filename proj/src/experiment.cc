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

#include "mvsgd/experiment.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mvsgd/dataset.h"
#include "mvsgd/errors.h"
#include "mvsgd/lr_schedule.h"
#include "mvsgd/rng.h"

namespace mvsgd {

namespace {

// Stream ids for mix_seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kShardStream = 2;
constexpr std::uint64_t kInitStream = 3;
constexpr std::uint64_t kServerStream = 4;
constexpr std::uint64_t kWorkerStreamBase = 100;

}  // namespace

Cluster build_cluster(const ExperimentConfig& config) {
  config.validate();
  const std::size_t total = config.train_samples + config.eval_samples;
  const std::uint64_t data_seed = mix_seed(config.seed, kDataStream);
  auto [all, truth] = config.model == ModelKind::kLogisticRegression
                          ? make_synthetic_classification(data_seed, total, config.input_dim, config.noise_std)
                          : make_synthetic_regression(data_seed, total, config.input_dim, config.noise_std);
  auto [train, eval] = split_tail(all, config.eval_samples);

  const Model model = make_model(config.model, ModelShape{config.input_dim, config.hidden_width, 1},
                                 mix_seed(config.seed, kInitStream), config.weight_decay);
  Cluster c;
  c.server.model = model;
  c.server.scheme = config.scheme;
  if (config.quantize_bits > 0) c.server.quantize = config.quantize_bits;
  c.server.rng = Rng(mix_seed(config.seed, kServerStream));
  if (config.eval_samples > 0) c.server.eval_set = std::move(eval);

  auto shards = shard_iid(train, config.workers, mix_seed(config.seed, kShardStream));
  c.workers.reserve(shards.size());
  for (std::size_t n = 0; n < shards.size(); ++n) {
    const std::size_t shard_size = shards[n].data.num_samples();
    c.workers.push_back(WorkerState{
        static_cast<int>(n), model, std::move(shards[n]), ErrorAccumulator(model.dim()), std::nullopt,
        BatchSampler(shard_size, config.batch_size, mix_seed(config.seed, kWorkerStreamBase + n))});
  }
  return c;
}

RoundConfig make_round_config(const ExperimentConfig& config,
                              std::int64_t round) {
  RoundConfig rc;
  rc.round = round;
  rc.k = config.k();
  rc.k_ad = config.k_ad();
  rc.local_steps = config.local_steps;
  rc.lr = lr_at(config.lr, round);
  rc.error_feedback = config.error_feedback;
  rc.quantization_feedback = config.quantization_feedback;
  rc.compressed = !(config.uncompressed_warmup && round < config.lr.warmup_rounds);
  rc.mask_layout = BlockLayout::for_density(config.phi);
  rc.ad_layout = BlockLayout::for_density(std::min(config.phi_ad, 1.0));
  rc.union_layout = BlockLayout::for_density(
      std::min(1.0, config.phi * static_cast<double>(config.workers)));
  return rc;
}

namespace {

double ratio(double dense_bits, std::uint64_t bits, std::size_t workers) {
  if (bits == 0) return 0.0;
  return dense_bits / (static_cast<double>(bits) / static_cast<double>(workers));
}

Summary summarize(const ExperimentConfig& config,
                  const std::vector<RoundReport>& reports,
                  const CommLedger& ledger) {
  Summary s;
  s.rounds = static_cast<std::int64_t>(reports.size());
  for (bool c : ledger.compressed) s.uncompressed_rounds += c ? 0 : 1;
  s.final_train_loss = reports.back().train_loss;
  s.final_eval_loss = reports.back().eval_loss;
  s.total_bits = ledger.totals();
  s.compressed_bits = ledger.totals(true);

  const double per_round = 32.0 * static_cast<double>(config.model_dim()) * config.local_steps;
  const double dense_all = per_round * static_cast<double>(s.rounds);
  const double dense_compressed = per_round * static_cast<double>(s.rounds - s.uncompressed_rounds);
  const auto& t = s.total_bits;
  const auto& cb = s.compressed_bits;
  s.compression_up = ratio(dense_all, t.up_loc + t.up_val, config.workers);
  s.compression_down = ratio(dense_all, t.down_loc + t.down_val, config.workers);
  s.compression_up_with_overhead = ratio(dense_all, t.up_total(), config.workers);
  s.compression_down_with_overhead = ratio(dense_all, t.down_total(), config.workers);
  s.compressed_phase_compression_up = ratio(dense_compressed, cb.up_loc + cb.up_val, config.workers);
  s.compressed_phase_compression_down = ratio(dense_compressed, cb.down_loc + cb.down_val, config.workers);
  return s;
}

nlohmann::ordered_json bits_json(const RoundBits& b) {
  nlohmann::ordered_json j;
  j["up_loc"] = b.up_loc;
  j["up_val"] = b.up_val;
  j["up_overhead"] = b.up_overhead;
  j["down_loc"] = b.down_loc;
  j["down_val"] = b.down_val;
  j["down_overhead"] = b.down_overhead;
  return j;
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::string reports_to_csv(const std::vector<RoundReport>& reports) {
  std::string out = csv_header() + '\n';
  for (const auto& r : reports) out += to_csv_row(r) + '\n';
  return out;
}

std::string summary_to_json(const ExperimentConfig& config,
                            const Summary& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = config.schema_version;
  j["scheme"] = std::string(to_string(config.scheme));
  j["model_dim"] = config.model_dim();
  j["workers"] = config.workers;
  j["local_steps"] = config.local_steps;
  j["k"] = config.k();
  j["k_ad"] = config.k_ad();
  j["quantize_bits"] = config.quantize_bits;
  j["rounds"] = s.rounds;
  j["uncompressed_rounds"] = s.uncompressed_rounds;
  j["final_train_loss"] = number_or_null(s.final_train_loss);
  j["final_eval_loss"] = number_or_null(s.final_eval_loss);
  j["total_bits"] = bits_json(s.total_bits);
  j["compressed_phase_bits"] = bits_json(s.compressed_bits);
  j["compression_up"] = s.compression_up;
  j["compression_down"] = s.compression_down;
  j["compression_up_with_overhead"] = s.compression_up_with_overhead;
  j["compression_down_with_overhead"] = s.compression_down_with_overhead;
  j["compressed_phase_compression_up"] = s.compressed_phase_compression_up;
  j["compressed_phase_compression_down"] = s.compressed_phase_compression_down;
  return j.dump(2) + '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::ofstream csv, summary;
  if (!config.output.empty()) {
    csv = open_output(config.output + ".csv");
    summary = open_output(config.output + ".summary.json");
  }

  Cluster cluster = build_cluster(config);
  ExperimentResult result;
  result.reports.reserve(static_cast<std::size_t>(config.rounds));
  for (std::int64_t r = 0; r < config.rounds; ++r) {
    RoundReport report = run_round(cluster.server, cluster.workers,
                                   make_round_config(config, r), result.ledger);
    if (!report.compressed) report.mask = SparseMask::empty(report.mask.dim());
    result.reports.push_back(std::move(report));
  }
  result.summary = summarize(config, result.reports, result.ledger);
  result.final_model = cluster.server.model;

  if (!config.output.empty()) {
    csv << reports_to_csv(result.reports);
    summary << summary_to_json(config, result.summary);
    if (!csv.flush() || !summary.flush()) throw IoError("failed writing metrics under '" + config.output + "'");
  }
  return result;
}

}  // namespace mvsgd
