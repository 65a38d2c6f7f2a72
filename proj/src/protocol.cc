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

#include "mvsgd/protocol.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "mvsgd/errors.h"

namespace mvsgd {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kBaselineDsgd: return "baseline-dsgd";
    case Scheme::kTopkLocal: return "topk-local";
    case Scheme::kMv: return "mv";
    case Scheme::kMvRs: return "mv-rs";
    case Scheme::kMvAd: return "mv-ad";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::kBaselineDsgd, Scheme::kTopkLocal, Scheme::kMv,
                   Scheme::kMvRs, Scheme::kMvAd}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

RoundBits& RoundBits::operator+=(const RoundBits& o) {
  up_loc += o.up_loc;
  up_val += o.up_val;
  up_overhead += o.up_overhead;
  down_loc += o.down_loc;
  down_val += o.down_val;
  down_overhead += o.down_overhead;
  return *this;
}

void CommLedger::record(const RoundBits& bits, bool was_compressed) {
  rounds.push_back(bits);
  compressed.push_back(was_compressed);
}

RoundBits CommLedger::totals() const {
  RoundBits t;
  for (const auto& r : rounds) t += r;
  return t;
}

RoundBits CommLedger::totals(bool was_compressed) const {
  RoundBits t;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    if (compressed[i] == was_compressed) t += rounds[i];
  }
  return t;
}

SparseUpdate server_aggregate(std::span<const SparseUpdate> updates,
                              std::size_t num_workers) {
  if (updates.empty() || num_workers < 1) throw InvalidArgument("server_aggregate: no updates");
  const SparseMask& mask = updates.front().mask;
  std::vector<double> sum(mask.size(), 0.0);
  for (const auto& u : updates) {
    if (u.mask != mask) throw ProtocolViolation("server_aggregate: update support differs from the consensus mask");
    if (u.values.size() != mask.size()) throw InvalidArgument("server_aggregate: values do not match mask");
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += u.values[k];
  }
  const auto n = static_cast<double>(num_workers);
  for (double& v : sum) v /= n;
  return SparseUpdate{mask, std::move(sum)};
}

SparseUpdate aggregate_union(std::span<const SparseUpdate> updates,
                             std::size_t num_workers) {
  if (updates.empty() || num_workers < 1) throw InvalidArgument("aggregate_union: no updates");
  const std::size_t dim = updates.front().mask.dim();
  SparseMask support = SparseMask::empty(dim);
  DenseVector sum(dim);
  for (const auto& u : updates) {
    if (u.values.size() != u.mask.size()) throw InvalidArgument("aggregate_union: values do not match mask");
    support = mask_union(support, u.mask);
    const auto& idx = u.mask.indices();
    for (std::size_t k = 0; k < idx.size(); ++k) sum[idx[k]] += u.values[k];
  }
  SparseUpdate out = apply_mask(sum, support);
  const auto n = static_cast<double>(num_workers);
  for (double& v : out.values) v /= n;
  return out;
}

Model apply_update(Model model, const SparseUpdate& update) {
  if (update.mask.dim() != model.dim()) throw InvalidArgument("apply_update: dimension mismatch");
  if (update.values.size() != update.mask.size()) throw InvalidArgument("apply_update: values do not match mask");
  const auto& idx = update.mask.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) model.params[idx[k]] += update.values[k];
  return model;
}

namespace {

// Encodes, meters and decodes a mask; the receiver works with the decoded
// copy. `copies` > 1 models a broadcast to that many workers.
SparseMask send_mask(const SparseMask& mask, const BlockLayout& layout,
                     std::uint64_t& counter, std::uint64_t copies = 1) {
  const BitStream wire = encode_mask(mask, layout);
  counter += wire.bit_len() * copies;
  return decode_mask(wire, mask.dim(), layout);
}

// Values go out as binary32 words, or as a quantized block whose means
// table is charged to `overhead`. Returns what the receiver reconstructs.
SparseUpdate send_values(const SparseUpdate& update, std::optional<int> q,
                         std::uint64_t& val, std::uint64_t& overhead,
                         std::uint64_t copies = 1) {
  const std::size_t count = update.values.size();
  if (!q) {
    const BitStream wire = encode_f32(update.values);
    val += wire.bit_len() * copies;
    return SparseUpdate{update.mask, decode_f32(wire, count)};
  }
  const BitStream wire = encode_quantized(quantize_or_zero(update.values, *q));
  const std::uint64_t code_bits = count * static_cast<std::uint64_t>(*q);
  val += code_bits * copies;
  overhead += (wire.bit_len() - code_bits) * copies;
  return SparseUpdate{update.mask, dequantize(decode_quantized(wire, count, *q))};
}

class RoundRunner {
 public:
  RoundRunner(ServerState& server, std::vector<WorkerState>& workers,
              const RoundConfig& cfg)
      : server_(server), workers_(workers), cfg_(cfg), n_(workers.size()) {}

  RoundReport run() {
    validate();
    local_phase();
    RoundReport report;
    report.round = cfg_.round;
    report.compressed = cfg_.compressed;
    report.vote_churn.assign(n_, 0);

    SparseUpdate down;
    const bool dense = !cfg_.compressed || server_.scheme == Scheme::kBaselineDsgd;
    if (dense) {
      down = exchange_on_mask(SparseMask::full(dim()), std::nullopt);
    } else {
      switch (server_.scheme) {
        case Scheme::kMv:
        case Scheme::kMvRs:
          down = exchange_on_mask(vote_full(report), server_.quantize);
          break;
        case Scheme::kMvAd:
          down = exchange_on_mask(vote_add_drop(report), server_.quantize);
          break;
        case Scheme::kTopkLocal:
          down = exchange_top_k_local(report);
          break;
        case Scheme::kBaselineDsgd:
          break;
      }
    }

    server_.model = apply_update(std::move(server_.model), down);
    for (auto& w : workers_) w.model = apply_update(std::move(w.model), down);

    report.mask = down.mask;
    if (cfg_.compressed) {
      if (server_.prev_mask) report.mask_churn = symmetric_difference_size(*server_.prev_mask, down.mask);
      server_.prev_mask = down.mask;
    }
    report.bits = bits_;
    fill_losses(report);
    return report;
  }

 private:
  std::size_t dim() const { return server_.model.dim(); }

  void validate() const {
    if (n_ == 0) throw InvalidArgument("run_round: no workers");
    for (const auto& w : workers_) {
      if (w.model.dim() != dim() || w.error.residual.dim() != dim()) {
        throw InvalidArgument("run_round: worker dimension differs from the server model");
      }
    }
    const bool sparse = cfg_.compressed && server_.scheme != Scheme::kBaselineDsgd;
    if (sparse && (cfg_.k < 1 || cfg_.k > dim())) throw InvalidArgument("run_round: K out of range");
    if (sparse && server_.scheme == Scheme::kMvAd && cfg_.k_ad < 1) {
      throw InvalidArgument("run_round: K_ad must be >= 1");
    }
  }

  void local_phase() {
    accumulated_.reserve(n_);
    for (auto& w : workers_) {
      DenseVector delta = local_steps(w.model, w.shard, cfg_.local_steps, cfg_.lr, w.sampler);
      accumulated_.push_back(cfg_.error_feedback ? accumulate(delta, w.error) : std::move(delta));
    }
  }

  // Plain majority vote: every worker sends its full top-K support.
  SparseMask vote_full(RoundReport& report) {
    std::vector<SparseMask> received;
    received.reserve(n_);
    for (std::size_t n = 0; n < n_; ++n) {
      SparseMask vote = top_k_mask(accumulated_[n], cfg_.k);
      received.push_back(send_mask(vote, cfg_.mask_layout, bits_.up_loc));
      remember_vote(n, std::move(vote), report);
    }
    const VoteCount counts = tally_votes(received);
    SparseMask mask = server_.scheme == Scheme::kMvRs
                          ? select_random_weighted(counts, cfg_.k, server_.rng)
                          : select_topk_mask(counts, cfg_.k);
    return send_mask(mask, cfg_.mask_layout, bits_.down_loc, n_);
  }

  // Add-drop vote. The first compressed round is a full vote that seeds
  // both the worker votes and the server's cumulative tally.
  SparseMask vote_add_drop(RoundReport& report) {
    if (!server_.vote_sum) {
      std::vector<SparseMask> received;
      received.reserve(n_);
      for (std::size_t n = 0; n < n_; ++n) {
        SparseMask vote = top_k_mask(accumulated_[n], cfg_.k);
        received.push_back(send_mask(vote, cfg_.mask_layout, bits_.up_loc));
        workers_[n].prev_vote = std::move(vote);
      }
      server_.vote_sum = tally_votes(received);
    } else {
      std::vector<AddDrop> received;
      received.reserve(n_);
      for (std::size_t n = 0; n < n_; ++n) {
        auto& w = workers_[n];
        if (!w.prev_vote) throw ProtocolViolation("run_round: worker has no previous add-drop vote");
        const SparseMask cur = top_k_mask(accumulated_[n], cfg_.k);
        const AddDrop change = ad_propose(*w.prev_vote, cur, accumulated_[n], cfg_.k_ad);
        received.push_back(AddDrop{send_mask(change.adds, cfg_.ad_layout, bits_.up_loc),
                                   send_mask(change.drops, cfg_.ad_layout, bits_.up_loc)});
        SparseMask next = apply_add_drop(*w.prev_vote, change);
        report.vote_churn[n] = symmetric_difference_size(*w.prev_vote, next);
        w.prev_vote = std::move(next);
      }
      server_.vote_sum = ad_apply(std::move(*server_.vote_sum), received);
    }
    const SparseMask mask = select_topk_mask(*server_.vote_sum, cfg_.k);
    return send_mask(mask, cfg_.mask_layout, bits_.down_loc, n_);
  }

  void remember_vote(std::size_t n, SparseMask vote, RoundReport& report) {
    auto& w = workers_[n];
    if (w.prev_vote && w.prev_vote->dim() == vote.dim()) {
      report.vote_churn[n] = symmetric_difference_size(*w.prev_vote, vote);
    }
    w.prev_vote = std::move(vote);
  }

  // Sparse value exchange on a mask every worker already holds.
  SparseUpdate exchange_on_mask(const SparseMask& mask, std::optional<int> q) {
    std::vector<SparseUpdate> received;
    received.reserve(n_);
    for (std::size_t n = 0; n < n_; ++n) {
      const SparseUpdate sent = apply_mask(accumulated_[n], mask);
      SparseUpdate got = send_values(sent, q, bits_.up_val, bits_.up_overhead);
      if (cfg_.error_feedback) {
        workers_[n].error.residual = residual(accumulated_[n], cfg_.quantization_feedback ? got : sent);
      }
      received.push_back(std::move(got));
    }
    const SparseUpdate agg = server_aggregate(received, n_);
    return send_values(agg, std::nullopt, bits_.down_val, bits_.down_overhead, n_);
  }

  // Each worker sends its own top-K with positions; the server averages on
  // the union of supports and sends the union back.
  SparseUpdate exchange_top_k_local(RoundReport& report) {
    std::vector<SparseUpdate> received;
    received.reserve(n_);
    for (std::size_t n = 0; n < n_; ++n) {
      SparseMask own = top_k_mask(accumulated_[n], cfg_.k);
      const SparseUpdate sent = apply_mask(accumulated_[n], own);
      SparseUpdate got = send_values(sent, server_.quantize, bits_.up_val, bits_.up_overhead);
      got.mask = send_mask(own, cfg_.mask_layout, bits_.up_loc);
      if (cfg_.error_feedback) {
        workers_[n].error.residual = residual(accumulated_[n], cfg_.quantization_feedback ? got : sent);
      }
      received.push_back(std::move(got));
      remember_vote(n, std::move(own), report);
    }
    const SparseUpdate agg = aggregate_union(received, n_);
    SparseUpdate down = send_values(agg, std::nullopt, bits_.down_val, bits_.down_overhead, n_);
    down.mask = send_mask(agg.mask, cfg_.union_layout, bits_.down_loc, n_);
    return down;
  }

  void fill_losses(RoundReport& report) const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& w : workers_) {
      sum += data_loss_sum(server_.model, w.shard.data);
      count += w.shard.data.num_samples();
    }
    report.train_loss = sum / static_cast<double>(count) + regularizer(server_.model);
    report.eval_loss = std::numeric_limits<double>::quiet_NaN();
    if (server_.eval_set && server_.eval_set->num_samples() > 0) {
      report.eval_loss = data_loss_sum(server_.model, *server_.eval_set) /
                         static_cast<double>(server_.eval_set->num_samples());
    }
  }

  ServerState& server_;
  std::vector<WorkerState>& workers_;
  const RoundConfig& cfg_;
  const std::size_t n_;
  std::vector<DenseVector> accumulated_;
  RoundBits bits_;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

RoundReport run_round(ServerState& server, std::vector<WorkerState>& workers,
                      const RoundConfig& cfg, CommLedger& ledger) {
  RoundReport report = RoundRunner(server, workers, cfg).run();
  ledger.record(report.bits, report.compressed);
  return report;
}

std::string csv_header() {
  return "round,train_loss,eval_loss,mask_churn,up_loc_bits,up_val_bits,"
         "up_overhead_bits,down_loc_bits,down_val_bits,down_overhead_bits";
}

std::string to_csv_row(const RoundReport& r) {
  std::string out = std::to_string(r.round);
  out += ',' + format_double(r.train_loss);
  out += ',' + format_double(r.eval_loss);
  out += ',' + std::to_string(r.mask_churn);
  for (std::uint64_t b : {r.bits.up_loc, r.bits.up_val, r.bits.up_overhead,
                          r.bits.down_loc, r.bits.down_val, r.bits.down_overhead}) {
    out += ',' + std::to_string(b);
  }
  return out;
}

}  // namespace mvsgd
