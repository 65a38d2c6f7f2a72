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

#ifndef MVSGD_ACCOUNTING_H_
#define MVSGD_ACCOUNTING_H_

#include <string>
#include <vector>

#include "mvsgd/protocol.h"

namespace mvsgd {

// Bits per model parameter per local step, per direction. Means tables of
// quantized messages are not included.
struct Budget {
  double up_loc = 0.0;
  double up_val = 0.0;
  double down_loc = 0.0;
  double down_val = 0.0;

  // 32-bit dense transmission divided by the per-parameter budget.
  double compression_up() const { return 32.0 / (up_loc + up_val); }
  double compression_down() const { return 32.0 / (down_loc + down_val); }
};

// Position cost per selected coordinate at density phi under the block
// format: ceil(log2(1/phi)) offset bits + 1 entry bit + 1 terminator bit
// (one block per selected coordinate on average).
int bits_per_position(double phi);

// Closed-form per-parameter budgets.
//   mv, mv-rs:  loc = phi*(ceil(log2(1/phi))+2)/H both ways,
//               val = phi*q/H up and phi*32/H down
//   mv-ad:      uplink loc = 2*phi_ad*(ceil(log2(1/phi_ad))+2)/H
//   topk-local: downlink at density min(1, N*phi), binary32 values
//   baseline:   32/H values, no positions
// The downlink always carries binary32 values. phi_ad is only checked for
// mv-ad.
Budget analytic_budget(Scheme scheme, double phi, double phi_ad, int q, int H,
                       int N);

struct TableRow {
  std::string method;
  Scheme scheme = Scheme::kMv;
  int local_steps = 1;
  int q = 32;
  Budget budget;
  std::string note;
};

struct TableSetup {
  double phi = 1e-2;
  double phi_ad = 1e-3;
  int quantized_bits = 4;
  int workers = 10;
};

// The fourteen compressed configurations: MV at H = 1, 2, 4, 8 and 8 with
// quantization, MV-RS at H = 4, 8, MV-AD at H = 1, 2, 4, 8 and 4, 8 with
// quantization, and per-worker top-K.
std::vector<TableRow> render_table(const TableSetup& setup = {});

// Ratios below 10 keep one decimal, larger ones are rounded to integers.
std::string format_ratio(double ratio);

std::string table_to_text(const std::vector<TableRow>& rows);
std::string table_to_csv(const std::vector<TableRow>& rows);

}  // namespace mvsgd

#endif  // MVSGD_ACCOUNTING_H_
