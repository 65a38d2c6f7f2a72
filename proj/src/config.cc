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

#include "mvsgd/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "mvsgd/errors.h"

namespace mvsgd {

std::size_t ExperimentConfig::model_dim() const {
  return parameter_count(model, ModelShape{input_dim, hidden_width, 1});
}

std::size_t ExperimentConfig::k() const {
  return static_cast<std::size_t>(std::llround(phi * static_cast<double>(model_dim())));
}

std::size_t ExperimentConfig::k_ad() const {
  return static_cast<std::size_t>(std::llround(phi_ad * static_cast<double>(model_dim())));
}

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) throw ConfigError("schema_version", "unsupported version");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (input_dim < 1) throw ConfigError("input_dim", "must be >= 1");
  if (model == ModelKind::kMlp1Hidden && hidden_width < 1) {
    throw ConfigError("hidden_width", "mlp-1hidden needs hidden_width >= 1");
  }
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay", "must be >= 0");
  if (train_samples < workers) throw ConfigError("train_samples", "must be >= workers");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std", "must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (!(phi > 0.0 && phi <= 1.0)) throw ConfigError("phi", "must lie in (0, 1]");
  const std::size_t d = model_dim();
  if (scheme != Scheme::kBaselineDsgd && (k() < 1 || k() > d)) {
    throw ConfigError("phi", "round(phi * d) must lie in [1, d]");
  }
  if (scheme == Scheme::kMvAd) {
    if (!(phi_ad > 0.0 && phi_ad <= phi)) throw ConfigError("phi_ad", "must lie in (0, phi]");
    if (k_ad() < 1) throw ConfigError("phi_ad", "round(phi_ad * d) must be >= 1");
  }
  if (local_steps < 1) throw ConfigError("local_steps", "must be >= 1");
  if (quantize_bits < 0 || quantize_bits > kMaxQuantBits) {
    throw ConfigError("quantize_bits", "must be 0 (off) or in [1, 16]");
  }
  if (rounds < 1) throw ConfigError("rounds", "must be >= 1");
  if (!(lr.base_rate > 0.0)) throw ConfigError("lr_base", "must be > 0");
  if (lr.warmup_rounds < 0) throw ConfigError("lr_warmup_rounds", "must be >= 0");
  if (!(lr.warmup_start >= 0.0) || lr.warmup_start > lr.base_rate) {
    throw ConfigError("lr_warmup_start", "must lie in [0, lr_base]");
  }
  for (const auto& d : lr.decays) {
    if (!(d.factor > 0.0 && d.factor <= 1.0)) throw ConfigError("lr_decay", "factors must lie in (0, 1]");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || text.empty()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(std::string(key), "must be finite");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(std::string(key), "expected true or false");
}

std::string print_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<LrDecay> parse_decays(std::string_view key, std::string_view text) {
  std::vector<LrDecay> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError(std::string(key), "expected round:factor entries");
    out.push_back(LrDecay{parse_number<std::int64_t>(key, trim(item.substr(0, colon))),
                          parse_number<double>(key, trim(item.substr(colon + 1)))});
  }
  return out;
}

std::string print_decays(const std::vector<LrDecay>& decays) {
  std::string out;
  for (const auto& d : decays) {
    if (!out.empty()) out += ',';
    out += std::to_string(d.round) + ':' + print_double(d.factor);
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> parse;
  std::function<std::string(const ExperimentConfig&)> print;
};

template <typename T, typename Member>
Field number_field(const char* key, Member member) {
  return Field{key,
               [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_number<T>(key, v); },
               [member](const ExperimentConfig& c) {
                 if constexpr (std::is_floating_point_v<T>) {
                   return print_double(c.*member);
                 } else {
                   return std::to_string(c.*member);
                 }
               }};
}

Field bool_field(const char* key, bool ExperimentConfig::*member) {
  return Field{key,
               [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_bool(key, v); },
               [member](const ExperimentConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> kFields = {
      number_field<int>("schema_version", &C::schema_version),
      number_field<std::uint64_t>("seed", &C::seed),
      number_field<std::size_t>("workers", &C::workers),
      Field{"model",
            [](C& c, std::string_view v) {
              try {
                c.model = parse_model_kind(v);
              } catch (const InvalidArgument& e) {
                throw ConfigError("model", e.what());
              }
            },
            [](const C& c) { return std::string(to_string(c.model)); }},
      number_field<std::size_t>("input_dim", &C::input_dim),
      number_field<std::size_t>("hidden_width", &C::hidden_width),
      number_field<double>("weight_decay", &C::weight_decay),
      number_field<std::size_t>("train_samples", &C::train_samples),
      number_field<std::size_t>("eval_samples", &C::eval_samples),
      number_field<double>("noise_std", &C::noise_std),
      number_field<std::size_t>("batch_size", &C::batch_size),
      Field{"scheme",
            [](C& c, std::string_view v) {
              try {
                c.scheme = parse_scheme(v);
              } catch (const InvalidArgument& e) {
                throw ConfigError("scheme", e.what());
              }
            },
            [](const C& c) { return std::string(to_string(c.scheme)); }},
      number_field<double>("phi", &C::phi),
      number_field<double>("phi_ad", &C::phi_ad),
      number_field<int>("local_steps", &C::local_steps),
      number_field<int>("quantize_bits", &C::quantize_bits),
      bool_field("error_feedback", &C::error_feedback),
      bool_field("quantization_feedback", &C::quantization_feedback),
      number_field<std::int64_t>("rounds", &C::rounds),
      Field{"lr_base",
            [](C& c, std::string_view v) { c.lr.base_rate = parse_number<double>("lr_base", v); },
            [](const C& c) { return print_double(c.lr.base_rate); }},
      Field{"lr_warmup_rounds",
            [](C& c, std::string_view v) { c.lr.warmup_rounds = parse_number<std::int64_t>("lr_warmup_rounds", v); },
            [](const C& c) { return std::to_string(c.lr.warmup_rounds); }},
      Field{"lr_warmup_start",
            [](C& c, std::string_view v) { c.lr.warmup_start = parse_number<double>("lr_warmup_start", v); },
            [](const C& c) { return print_double(c.lr.warmup_start); }},
      Field{"lr_decay",
            [](C& c, std::string_view v) { c.lr.decays = parse_decays("lr_decay", v); },
            [](const C& c) { return print_decays(c.lr.decays); }},
      bool_field("uncompressed_warmup", &C::uncompressed_warmup),
      Field{"output",
            [](C& c, std::string_view v) { c.output = std::string(v); },
            [](const C& c) { return c.output; }},
  };
  return kFields;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& all = fields();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Field& f) { return key == f.key; });
    if (it == all.end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "repeated key");
    it->parse(config, value);
  }
  if (!seen.contains("schema_version")) throw ConfigError("schema_version", "missing");
  config.validate();
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.key << " = " << f.print(config) << '\n';
  return out.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace mvsgd
