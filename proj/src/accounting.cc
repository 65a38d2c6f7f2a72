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

#include "mvsgd/accounting.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mvsgd/codec.h"
#include "mvsgd/errors.h"

namespace mvsgd {

int bits_per_position(double phi) {
  return BlockLayout::for_density(phi).position_bits() + 2;
}

Budget analytic_budget(Scheme scheme, double phi, double phi_ad, int q, int H,
                       int N) {
  if (!(phi > 0.0 && phi < 1.0)) throw InvalidArgument("analytic_budget: phi must lie in (0, 1)");
  if (scheme == Scheme::kMvAd && !(phi_ad > 0.0 && phi_ad <= phi)) {
    throw InvalidArgument("analytic_budget: phi_ad must lie in (0, phi]");
  }
  if (q < 1 || q > 32) throw InvalidArgument("analytic_budget: q must be in [1, 32]");
  if (H < 1) throw InvalidArgument("analytic_budget: H must be >= 1");
  if (N < 1) throw InvalidArgument("analytic_budget: N must be >= 1");

  const double h = H;
  Budget b;
  switch (scheme) {
    case Scheme::kBaselineDsgd:
      b.up_val = b.down_val = 32.0 / h;
      return b;
    case Scheme::kMv:
    case Scheme::kMvRs:
    case Scheme::kMvAd:
    case Scheme::kTopkLocal:
      b.up_loc = phi * bits_per_position(phi) / h;
      b.up_val = phi * q / h;
      b.down_loc = b.up_loc;
      b.down_val = phi * 32.0 / h;
      break;
  }
  if (scheme == Scheme::kMvAd) {
    b.up_loc = 2.0 * phi_ad * bits_per_position(phi_ad) / h;
  } else if (scheme == Scheme::kTopkLocal) {
    const double union_density = std::min(1.0, N * phi);
    b.down_loc = union_density * bits_per_position(union_density) / h;
    b.down_val = union_density * 32.0 / h;
  }
  return b;
}

std::vector<TableRow> render_table(const TableSetup& s) {
  struct Entry {
    const char* method;
    Scheme scheme;
    int local_steps;
    bool quantized;
    const char* note;
  };
  static constexpr Entry kEntries[] = {
      {"SSGD-MV", Scheme::kMv, 1, false, ""},
      {"SSGD-MV-L2", Scheme::kMv, 2, false, ""},
      {"SSGD-MV-L4", Scheme::kMv, 4, false, ""},
      {"SSGD-MV-L8", Scheme::kMv, 8, false, ""},
      {"SSGD-MV-L8-Q", Scheme::kMv, 8, true, ""},
      {"SSGD-MV-RS-L4", Scheme::kMvRs, 4, false, ""},
      {"SSGD-MV-RS-L8", Scheme::kMvRs, 8, false,
       "published budgets repeat the H=4 row; formula values shown"},
      {"SSGD-MV-AD", Scheme::kMvAd, 1, false, ""},
      {"SSGD-MV-AD-L2", Scheme::kMvAd, 2, false, ""},
      {"SSGD-MV-AD-L4", Scheme::kMvAd, 4, false, ""},
      {"SSGD-MV-AD-L4-Q", Scheme::kMvAd, 4, true, ""},
      {"SSGD-MV-AD-L8", Scheme::kMvAd, 8, false, ""},
      {"SSGD-MV-AD-L8-Q", Scheme::kMvAd, 8, true, ""},
      {"SSGD-top-K", Scheme::kTopkLocal, 1, false, ""},
  };
  std::vector<TableRow> rows;
  for (const auto& e : kEntries) {
    TableRow r;
    r.method = e.method;
    r.scheme = e.scheme;
    r.local_steps = e.local_steps;
    r.q = e.quantized ? s.quantized_bits : 32;
    r.budget = analytic_budget(e.scheme, s.phi, s.phi_ad, r.q, e.local_steps, s.workers);
    r.note = e.note;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_ratio(double ratio) {
  char buf[32];
  if (ratio < 10.0) {
    std::snprintf(buf, sizeof(buf), "%.1f", ratio);
  } else {
    std::snprintf(buf, sizeof(buf), "%.0f", std::round(ratio));
  }
  return buf;
}

namespace {

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string exact_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string table_to_text(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-17s %10s %10s %10s %10s %9s %9s  %s\n",
                "method", "up_q_loc", "up_q_val", "dn_q_loc", "dn_q_val",
                "x_up", "x_down", "note");
  out << line;
  for (const auto& r : rows) {
    const Budget& b = r.budget;
    std::snprintf(line, sizeof(line), "%-17s %10s %10s %10s %10s %9s %9s  %s\n",
                  r.method.c_str(), short_double(b.up_loc).c_str(),
                  short_double(b.up_val).c_str(), short_double(b.down_loc).c_str(),
                  short_double(b.down_val).c_str(),
                  ("x" + format_ratio(b.compression_up())).c_str(),
                  ("x" + format_ratio(b.compression_down())).c_str(), r.note.c_str());
    out << line;
  }
  return out.str();
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "method,scheme,local_steps,q,up_q_loc,up_q_val,down_q_loc,down_q_val,"
         "compression_up,compression_down,note\n";
  for (const auto& r : rows) {
    const Budget& b = r.budget;
    out << r.method << ',' << to_string(r.scheme) << ',' << r.local_steps << ','
        << r.q << ',' << exact_double(b.up_loc) << ',' << exact_double(b.up_val)
        << ',' << exact_double(b.down_loc) << ',' << exact_double(b.down_val)
        << ',' << exact_double(b.compression_up()) << ','
        << exact_double(b.compression_down()) << ',' << r.note << '\n';
  }
  return out.str();
}

}  // namespace mvsgd
