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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and time limit is pinned below.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mvsgd/accounting.h"
#include "mvsgd/codec.h"
#include "mvsgd/config.h"
#include "mvsgd/experiment.h"
#include "mvsgd/local_sgd.h"
#include "mvsgd/protocol.h"
#include "mvsgd/rng.h"
#include "mvsgd/sparsify.h"
#include "mvsgd/voting.h"

namespace mvsgd {
namespace {

namespace fs = std::filesystem;

// Time limits, seconds.
constexpr double kTableSeconds = 1.0;
constexpr double kLedgerSeconds = 120.0;
constexpr double kCodecSeconds = 30.0;
constexpr double kConvergenceSeconds = 60.0;

// Ledger agreement: relative deviation of measured bits/(d*H) from the
// closed-form budget.
constexpr double kLedgerRelTol = 0.01;
// Convergence: |loss_mv - loss_dsgd| / loss_dsgd.
constexpr double kConvergenceRelTol = 0.05;
// Interval-membership checks allow for rounding in alpha = (max/min)^(1/L).
constexpr double kIntervalRelTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Published communication table.
// ---------------------------------------------------------------------------

struct Printed {
  std::string mantissa;  // significant digits exactly as displayed
  int exponent = 0;
  double value() const { return std::stod(mantissa) * std::pow(10.0, exponent); }
};

struct PublishedRow {
  std::string method;
  Printed up_loc, up_val, down_loc, down_val;
  std::string ratio_up, ratio_down;
};

// Transcribed cell by cell.
const std::vector<PublishedRow>& published_table() {
  static const std::vector<PublishedRow> rows = {
      {"SSGD-MV", {"9", -2}, {"3.2", -1}, {"9", -2}, {"3.2", -1}, "78", "78"},
      {"SSGD-MV-L2", {"4.5", -2}, {"1.6", -1}, {"4.5", -2}, {"1.6", -1}, "156", "156"},
      {"SSGD-MV-L4", {"2.25", -2}, {"8", -2}, {"2.25", -2}, {"8", -2}, "312", "312"},
      {"SSGD-MV-L8", {"1.125", -2}, {"4", -2}, {"1.125", -2}, {"4", -2}, "624", "624"},
      {"SSGD-MV-L8-Q", {"1.125", -2}, {"5", -3}, {"1.125", -2}, {"4", -2}, "2000", "624"},
      {"SSGD-MV-RS-L4", {"2.25", -2}, {"8", -2}, {"2.25", -2}, {"8", -2}, "312", "312"},
      {"SSGD-MV-RS-L8", {"2.25", -2}, {"8", -2}, {"2.25", -2}, {"8", -2}, "624", "624"},
      {"SSGD-MV-AD", {"2.4", -2}, {"3.2", -1}, {"9", -2}, {"3.2", -1}, "93", "78"},
      {"SSGD-MV-AD-L2", {"1.2", -2}, {"1.6", -1}, {"4.5", -2}, {"1.6", -1}, "186", "156"},
      {"SSGD-MV-AD-L4", {"6", -3}, {"8", -2}, {"2.25", -2}, {"8", -2}, "372", "312"},
      {"SSGD-MV-AD-L4-Q", {"6", -3}, {"1", -2}, {"2.25", -2}, {"8", -2}, "2000", "312"},
      {"SSGD-MV-AD-L8", {"3", -3}, {"4", -2}, {"1.125", -2}, {"4", -2}, "745", "624"},
      {"SSGD-MV-AD-L8-Q", {"3", -3}, {"5", -3}, {"1.125", -2}, {"4", -2}, "4000", "624"},
      {"SSGD-top-K", {"9", -2}, {"3.2", -1}, {"6", -1}, {"3.2", 0}, "78", "8.4"},
  };
  return rows;
}

// Rounds `v` to the significant digits shown in `p` and compares.
bool matches_printed_budget(double v, const Printed& p) {
  int digits = 0;
  bool leading = true;
  for (char c : p.mantissa) {
    if (c < '0' || c > '9') continue;
    if (c == '0' && leading) continue;
    leading = false;
    ++digits;
  }
  if (v == 0.0) return p.value() == 0.0;
  const double mag = std::floor(std::log10(std::abs(v)));
  const double scale = std::pow(10.0, mag - (digits - 1));
  const double rounded = std::round(v / scale) * scale;
  return std::abs(rounded - p.value()) <= 1e-9 * std::abs(p.value());
}

// Ratios: decimals as shown; integers to their last nonzero digit (the
// trailing zeros of a figure like 2000 carry no precision).
bool matches_printed_ratio(double v, const std::string& printed) {
  const double target = std::stod(printed);
  const auto dot = printed.find('.');
  double unit = 1.0;
  if (dot != std::string::npos) {
    unit = std::pow(10.0, -static_cast<double>(printed.size() - dot - 1));
  } else {
    for (auto it = printed.rbegin(); it != printed.rend() && *it == '0' &&
                                     std::next(it) != printed.rend();
         ++it) {
      unit *= 10.0;
    }
  }
  return std::abs(std::round(v / unit) * unit - target) <= 1e-9 * target;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int run_command(const std::string& cmd, std::string& out) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_table() {
  std::string csv;
  if (run_command(std::string(MVSGD_CLI_PATH) + " table --format csv", csv) != 0) {
    return {false, "table subcommand failed"};
  }
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  const auto& expect = published_table();
  if (rows.size() != expect.size()) return {false, "row count " + std::to_string(rows.size())};

  std::vector<std::string> misses;
  int cells = 0;
  bool flagged = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& e = expect[i];
    if (r.size() != 11 || r[0] != e.method) {
      misses.push_back("row " + std::to_string(i) + " is " + r[0]);
      continue;
    }
    const double up = std::stod(r[8]);
    const double down = std::stod(r[9]);
    cells += 2;
    if (!matches_printed_ratio(up, e.ratio_up)) {
      misses.push_back(e.method + " uplink x" + fmt(up, 6) + " vs printed x" + e.ratio_up);
    }
    if (!matches_printed_ratio(down, e.ratio_down)) {
      misses.push_back(e.method + " downlink x" + fmt(down, 6) + " vs printed x" + e.ratio_down);
    }
    if (e.method == "SSGD-MV-RS-L8") {
      // The printed budgets repeat the H=4 row; the row must carry formula
      // budgets and a flag instead.
      const Budget b = analytic_budget(Scheme::kMvRs, 1e-2, 1e-3, 32, 8, 10);
      flagged = !r[10].empty() && std::stod(r[4]) == b.up_loc && std::stod(r[5]) == b.up_val;
      if (!flagged) misses.push_back(e.method + " not flagged with formula budgets");
      continue;
    }
    const Printed* printed[4] = {&e.up_loc, &e.up_val, &e.down_loc, &e.down_val};
    static const char* names[4] = {"up q_loc", "up q_val", "down q_loc", "down q_val"};
    for (int c = 0; c < 4; ++c) {
      ++cells;
      const double v = std::stod(r[4 + c]);
      if (!matches_printed_budget(v, *printed[c])) {
        misses.push_back(e.method + " " + names[c] + " " + fmt(v) + " vs printed " +
                         printed[c]->mantissa + "e" + std::to_string(printed[c]->exponent));
      }
    }
  }
  std::string detail = std::to_string(cells - static_cast<int>(misses.size())) + "/" +
                       std::to_string(cells) + " cells match";
  if (flagged) detail += ", MV-RS-L8 flagged";
  for (const auto& m : misses) detail += "; MISMATCH " + m;
  return {misses.empty(), detail};
}

// ---------------------------------------------------------------------------
// 2. Ledger agreement at d = 2^20.
// ---------------------------------------------------------------------------

Outcome criterion_ledger() {
  constexpr std::size_t kDim = std::size_t{1} << 20;
  constexpr std::int64_t kRounds = 50;
  std::string detail;
  bool pass = true;
  for (Scheme scheme : {Scheme::kMv, Scheme::kMvAd}) {
    for (int q : {32, 4}) {
      ExperimentConfig c;
      c.seed = 5;
      c.workers = 4;
      c.input_dim = kDim;
      c.train_samples = 8;
      c.eval_samples = 0;
      c.batch_size = 2;
      c.scheme = scheme;
      c.phi = 1e-2;
      c.phi_ad = 1e-3;
      c.quantize_bits = q == 32 ? 0 : q;
      c.rounds = kRounds;
      c.lr = LrSchedule{0.25 / static_cast<double>(kDim), 0, 0.25 / static_cast<double>(kDim), {}};
      c.uncompressed_warmup = false;
      Cluster cl = build_cluster(c);
      const Budget want = analytic_budget(scheme, c.phi, c.phi_ad, q, c.local_steps,
                                          static_cast<int>(c.workers));
      const double norm = static_cast<double>(c.workers) * static_cast<double>(kDim) * c.local_steps;
      double worst = 0.0;
      double overhead = 0.0;
      std::size_t min_adds = c.k();
      CommLedger ledger;
      for (std::int64_t t = 0; t < kRounds; ++t) {
        const RoundReport r = run_round(cl.server, cl.workers, make_round_config(c, t), ledger);
        if (scheme == Scheme::kMvAd && t == 0) continue;  // full-vote bootstrap
        const double got[4] = {r.bits.up_loc / norm, r.bits.up_val / norm,
                               r.bits.down_loc / norm, r.bits.down_val / norm};
        const double ref[4] = {want.up_loc, want.up_val, want.down_loc, want.down_val};
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[k] - ref[k]) / ref[k]);
        overhead = std::max(overhead, r.bits.up_overhead / norm);
        if (scheme == Scheme::kMvAd) {
          for (std::size_t churn : r.vote_churn) min_adds = std::min(min_adds, churn / 2);
        }
      }
      const bool ok = worst <= kLedgerRelTol;
      pass = pass && ok;
      detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(scheme)) +
                " q=" + std::to_string(q) + " max rel dev " + fmt(worst, 3) +
                " (means overhead " + fmt(overhead, 3) + " bits/param)";
      if (scheme == Scheme::kMvAd) {
        detail += ", min adds " + std::to_string(min_adds) + "/K_ad " + std::to_string(c.k_ad());
      }
    }
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 3. Codec properties.
// ---------------------------------------------------------------------------

SparseMask random_mask_geometric(Rng& rng, std::size_t dim, double density) {
  std::vector<std::size_t> idx;
  if (density >= 1.0) {
    idx.resize(dim);
    std::iota(idx.begin(), idx.end(), 0);
    return SparseMask(dim, idx);
  }
  const double log_q = std::log1p(-density);
  double pos = std::floor(std::log(1.0 - rng.uniform()) / log_q);
  while (pos < static_cast<double>(dim)) {
    idx.push_back(static_cast<std::size_t>(pos));
    pos += 1.0 + std::floor(std::log(1.0 - rng.uniform()) / log_q);
  }
  return SparseMask(dim, idx);
}

Outcome criterion_codec() {
  Rng rng(2718);
  std::size_t mask_ok = 0, mask_total = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t dim = 1 + rng.below(std::size_t{1} << 16);
    const int block_bits = 1 + static_cast<int>(rng.below(10));
    const BlockLayout layout = BlockLayout::power_of_two(block_bits);
    const SparseMask m = random_mask_geometric(rng, dim, std::pow(10.0, -4.0 * rng.uniform()));
    const BitStream wire = encode_mask(m, layout);
    const std::size_t blocks = (dim + layout.block_size - 1) / layout.block_size;
    const bool len_ok = wire.bit_len() == m.size() * (block_bits + 1) + blocks;
    ++mask_total;
    if (len_ok && decode_mask(wire, dim, layout) == m) ++mask_ok;
  }

  std::size_t quant_ok = 0, quant_total = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(2000);
    const int q = 1 + static_cast<int>(rng.below(8));
    const int levels = 1 << (q - 1);
    std::vector<double> v(n);
    const double spread = 6.0 * rng.uniform();
    for (auto& x : v) {
      x = (rng.below(2) ? -1.0 : 1.0) * std::pow(10.0, -spread * rng.uniform());
      if (rng.uniform() < 0.02) x = 0.0;
    }
    v[0] = 1.0;
    const QuantizedBlock block = quantize_values(v, q);
    const BitStream wire = encode_quantized(block);
    const QuantizedBlock got = decode_quantized(wire, n, q);
    const std::vector<double> out = dequantize(block);

    double vmax = 0.0, vmin = INFINITY;
    for (double x : v) {
      if (x != 0.0) {
        vmax = std::max(vmax, std::abs(x));
        vmin = std::min(vmin, std::abs(x));
      }
    }
    const double alpha = std::pow(vmax / vmin, 1.0 / levels);
    bool ok = wire.bit_len() == n * q + static_cast<std::size_t>(levels) * 32 &&
              got.codes == block.codes && block.v_max == vmax && block.v_min == vmin;
    BitReader codes(block.codes);
    for (std::size_t i = 0; ok && i < n; ++i) {
      const bool neg = codes.read_bit();
      const int l = static_cast<int>(codes.read_bits(q - 1)) + 1;
      if (v[i] == 0.0) continue;
      const double m = std::abs(v[i]);
      ok = neg == (v[i] < 0) && std::signbit(out[i]) == std::signbit(v[i]) &&
           std::abs(out[i]) >= vmin && std::abs(out[i]) <= vmax;
      if (ok && vmax > vmin) {
        const double hi = vmax / std::pow(alpha, l - 1);
        const double lo = vmax / std::pow(alpha, l);
        ok = m <= hi * (1 + kIntervalRelTol) && (l == levels || m > lo * (1 - kIntervalRelTol));
      }
    }
    ++quant_total;
    quant_ok += ok;
  }
  const bool pass = mask_ok == mask_total && quant_ok == quant_total;
  return {pass, std::to_string(mask_ok) + "/" + std::to_string(mask_total) +
                    " mask roundtrips exact, " + std::to_string(quant_ok) + "/" +
                    std::to_string(quant_total) + " quantizer roundtrips hold sign, range and " +
                    "interval invariants"};
}

// ---------------------------------------------------------------------------
// 4. Voting oracles.
// ---------------------------------------------------------------------------

SparseMask recount_select(const std::vector<std::vector<bool>>& votes, std::size_t d,
                          std::size_t k) {
  std::vector<std::pair<std::int64_t, std::size_t>> ranked;
  for (std::size_t i = 0; i < d; ++i) {
    std::int64_t c = 0;
    for (const auto& v : votes) c += v[i] ? 1 : 0;
    ranked.push_back({-c, i});
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < k; ++j) idx.push_back(ranked[j].second);
  return SparseMask::from_unsorted(d, idx);
}

Outcome criterion_voting() {
  Rng rng(31415);
  std::size_t agree = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t d = 1 + rng.below(64);
    const std::size_t k = 1 + rng.below(d);
    std::vector<SparseMask> masks;
    std::vector<std::vector<bool>> dense;
    for (std::size_t w = 0; w < n; ++w) {
      std::vector<bool> bits(d, false);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < d; ++i) {
        if (rng.below(2)) {
          bits[i] = true;
          idx.push_back(i);
        }
      }
      masks.emplace_back(d, idx);
      dense.push_back(bits);
    }
    agree += select_topk_mask(tally_votes(masks), k) == recount_select(dense, d, k);
  }

  ExperimentConfig c;
  c.seed = 9;
  c.workers = 4;
  c.input_dim = 256;
  c.train_samples = 512;
  c.eval_samples = 0;
  c.batch_size = 16;
  c.scheme = Scheme::kMvAd;
  c.phi = 0.05;
  c.phi_ad = 0.01;
  c.rounds = 200;
  c.lr = LrSchedule{0.01, 0, 0.01, {}};
  c.uncompressed_warmup = false;
  Cluster cl = build_cluster(c);
  CommLedger ledger;
  std::int64_t tally_ok = 0;
  std::size_t max_churn = 0;
  bool sizes_ok = true;
  for (std::int64_t t = 0; t < c.rounds; ++t) {
    const RoundReport r = run_round(cl.server, cl.workers, make_round_config(c, t), ledger);
    std::vector<std::int64_t> recount(c.model_dim(), 0);
    for (const auto& w : cl.workers) {
      sizes_ok = sizes_ok && w.prev_vote && w.prev_vote->size() == c.k();
      for (std::size_t i : w.prev_vote->indices()) ++recount[i];
    }
    tally_ok += cl.server.vote_sum && cl.server.vote_sum->counts == recount;
    for (std::size_t churn : r.vote_churn) max_churn = std::max(max_churn, churn);
  }
  const bool pass = agree == 1000 && tally_ok == c.rounds && max_churn <= 2 * c.k_ad() && sizes_ok;
  return {pass, std::to_string(agree) + "/1000 selections equal brute-force recount; vote_sum " +
                    "equals recount after " + std::to_string(tally_ok) + "/" +
                    std::to_string(c.rounds) + " rounds; max churn " + std::to_string(max_churn) +
                    " <= 2K_ad = " + std::to_string(2 * c.k_ad()) +
                    (sizes_ok ? "; every vote has K entries" : "; VOTE SIZE != K")};
}

// ---------------------------------------------------------------------------
// 5. Degenerate equivalences.
// ---------------------------------------------------------------------------

Outcome criterion_degenerate() {
  ExperimentConfig mv;
  mv.seed = 3;
  mv.workers = 4;
  mv.input_dim = 64;
  mv.train_samples = 256;
  mv.eval_samples = 32;
  mv.batch_size = 8;
  mv.scheme = Scheme::kMv;
  mv.phi = 1.0;
  mv.local_steps = 2;
  mv.rounds = 30;
  mv.lr = LrSchedule{0.02, 3, 0.005, {}};
  ExperimentConfig base = mv;
  base.scheme = Scheme::kBaselineDsgd;
  Cluster a = build_cluster(mv), b = build_cluster(base);
  CommLedger la, lb;
  std::int64_t equal_rounds = 0;
  for (std::int64_t t = 0; t < mv.rounds; ++t) {
    const RoundReport ra = run_round(a.server, a.workers, make_round_config(mv, t), la);
    const RoundReport rb = run_round(b.server, b.workers, make_round_config(base, t), lb);
    equal_rounds += a.server.model == b.server.model && ra.train_loss == rb.train_loss &&
                    (ra.eval_loss == rb.eval_loss);
  }

  // Single worker, H = 1: majority vote against top-K with error feedback,
  // both the library's per-worker scheme and a direct reimplementation.
  ExperimentConfig one;
  one.seed = 4;
  one.workers = 1;
  one.input_dim = 128;
  one.train_samples = 128;
  one.eval_samples = 0;
  one.batch_size = 16;
  one.scheme = Scheme::kMv;
  one.phi = 0.05;
  one.rounds = 50;
  one.lr = LrSchedule{0.02, 0, 0.02, {}};
  one.uncompressed_warmup = false;
  ExperimentConfig topk = one;
  topk.scheme = Scheme::kTopkLocal;
  Cluster m1 = build_cluster(one), t1 = build_cluster(topk);
  Model model = m1.server.model;
  DenseVector error(model.dim());
  BatchSampler sampler = m1.workers[0].sampler;
  CommLedger l1, l2;
  std::int64_t one_equal = 0;
  for (std::int64_t t = 0; t < one.rounds; ++t) {
    const RoundConfig rc = make_round_config(one, t);
    DenseVector acc = local_steps(model, m1.workers[0].shard, 1, rc.lr, sampler);
    for (std::size_t i = 0; i < acc.dim(); ++i) acc[i] += error[i];
    const SparseMask m = top_k_mask(acc, one.k());
    SparseUpdate sent = apply_mask(acc, m);
    for (std::size_t i = 0; i < acc.dim(); ++i) error[i] = m.contains(i) ? 0.0 : acc[i];
    for (auto& v : sent.values) v = static_cast<float>(v);
    model = apply_update(model, sent);

    const RoundReport rm = run_round(m1.server, m1.workers, rc, l1);
    const RoundReport rt = run_round(t1.server, t1.workers, make_round_config(topk, t), l2);
    one_equal += rm.mask == m && rt.mask == m && m1.server.model == model &&
                 t1.server.model == model && m1.workers[0].error.residual == error;
  }
  const bool pass = equal_rounds == mv.rounds && one_equal == one.rounds;
  return {pass, "K=d: " + std::to_string(equal_rounds) + "/" + std::to_string(mv.rounds) +
                    " rounds bitwise equal to dense DSGD (H=2, 3 warmup rounds); N=1,H=1: " +
                    std::to_string(one_equal) + "/" + std::to_string(one.rounds) +
                    " rounds equal to top-K with error feedback"};
}

// ---------------------------------------------------------------------------
// 6. Convergence with and without error feedback.
// ---------------------------------------------------------------------------

double final_loss(const ExperimentConfig& c) {
  Cluster cl = build_cluster(c);
  CommLedger ledger;
  RoundReport last;
  for (std::int64_t t = 0; t < c.rounds; ++t) {
    last = run_round(cl.server, cl.workers, make_round_config(c, t), ledger);
  }
  return last.train_loss;
}

Outcome criterion_convergence() {
  ExperimentConfig base;
  base.seed = 11;
  base.workers = 4;
  base.model = ModelKind::kLinearRegression;
  base.input_dim = 256;
  base.train_samples = 4096;
  base.eval_samples = 0;
  base.noise_std = 0.5;
  base.batch_size = 32;
  base.scheme = Scheme::kBaselineDsgd;
  base.phi = 0.05;
  base.rounds = 500;
  base.lr = LrSchedule{0.05, 0, 0.05, {{300, 0.5}, {400, 0.5}}};
  base.uncompressed_warmup = false;
  ExperimentConfig ef = base;
  ef.scheme = Scheme::kMv;
  ef.error_feedback = true;
  ExperimentConfig no_ef = ef;
  no_ef.error_feedback = false;

  const double l_base = final_loss(base);
  const double l_ef = final_loss(ef);
  const double l_no = final_loss(no_ef);
  const double rel = std::abs(l_ef - l_base) / l_base;
  const bool pass = rel <= kConvergenceRelTol && l_no > l_ef;
  return {pass, "final train loss DSGD " + fmt(l_base) + ", MV+EF " + fmt(l_ef) + " (rel diff " +
                    fmt(rel, 3) + " <= " + fmt(kConvergenceRelTol) + "), MV without EF " +
                    fmt(l_no)};
}

// ---------------------------------------------------------------------------
// 7. Determinism of the metrics files.
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "mvsgd_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<ExperimentConfig> configs;
  for (Scheme s : {Scheme::kBaselineDsgd, Scheme::kTopkLocal, Scheme::kMv, Scheme::kMvRs,
                   Scheme::kMvAd}) {
    ExperimentConfig c;
    c.scheme = s;
    c.workers = 3;
    c.input_dim = 128;
    c.train_samples = 384;
    c.eval_samples = 64;
    c.batch_size = 16;
    c.phi = 0.05;
    c.phi_ad = 0.02;
    c.rounds = 40;
    c.lr = LrSchedule{0.02, 4, 0.005, {{30, 0.1}}};
    configs.push_back(c);
  }
  ExperimentConfig quant = configs[4];
  quant.quantize_bits = 4;
  quant.local_steps = 4;
  quant.quantization_feedback = true;
  configs.push_back(quant);
  ExperimentConfig mlp = configs[3];
  mlp.model = ModelKind::kMlp1Hidden;
  mlp.hidden_width = 8;
  mlp.input_dim = 16;
  mlp.phi = 0.1;
  configs.push_back(mlp);
  ExperimentConfig logit = configs[2];
  logit.model = ModelKind::kLogisticRegression;
  logit.quantize_bits = 2;
  configs.push_back(logit);

  std::size_t identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ExperimentConfig c = configs[i];
    c.seed = 100 + i;
    const std::string a = (dir / ("a" + std::to_string(i))).string();
    const std::string b = (dir / ("b" + std::to_string(i))).string();
    c.output = a;
    run_experiment(c);
    c.output = b;
    run_experiment(c);
    identical += slurp(a + ".csv") == slurp(b + ".csv") &&
                 slurp(a + ".summary.json") == slurp(b + ".summary.json") &&
                 !slurp(a + ".csv").empty();
  }
  fs::remove_all(dir);
  return {identical == configs.size(),
          std::to_string(identical) + "/" + std::to_string(configs.size()) +
              " configs produced byte-identical CSV and summary files"};
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace mvsgd

int main() {
  using namespace mvsgd;
  const std::vector<Criterion> criteria = {
      {1, "communication table reproduction", kTableSeconds, criterion_table},
      {2, "ledger agreement at d=2^20", kLedgerSeconds, criterion_ledger},
      {3, "codec property suite", kCodecSeconds, criterion_codec},
      {4, "voting oracle equivalence", 0.0, criterion_voting},
      {5, "degenerate equivalences", 0.0, criterion_degenerate},
      {6, "convergence with error feedback", kConvergenceSeconds, criterion_convergence},
      {7, "determinism of metrics files", 0.0, criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt(secs, 3) + " s";
    if (c.time_limit > 0.0) {
      timing += " (limit " + fmt(c.time_limit) + " s)";
      if (secs >= c.time_limit) {
        o.pass = false;
        o.detail += "; TIME LIMIT EXCEEDED";
      }
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": "
              << o.detail << " [" << timing << "]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
