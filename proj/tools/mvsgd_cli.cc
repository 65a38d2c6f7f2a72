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

// mvsgd: run a training experiment, print the communication table, or fuzz
// the wire codecs.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mvsgd/accounting.h"
#include "mvsgd/config.h"
#include "mvsgd/experiment.h"
#include "mvsgd/selftest.h"

namespace {

int run_command(const std::string& config_path, const std::string& output) {
  mvsgd::ExperimentConfig config = mvsgd::load_config(config_path);
  if (!output.empty()) config.output = output;
  config.validate();
  const mvsgd::ExperimentResult result = mvsgd::run_experiment(config);
  std::cout << mvsgd::summary_to_json(config, result.summary) << "\n";
  return 0;
}

int table_command(const mvsgd::TableSetup& setup, const std::string& format) {
  const auto rows = mvsgd::render_table(setup);
  if (format == "text" || format == "both") std::cout << mvsgd::table_to_text(rows);
  if (format == "both") std::cout << "\n";
  if (format == "csv" || format == "both") std::cout << mvsgd::table_to_csv(rows);
  return 0;
}

int selftest_command(std::size_t mask_trials, std::size_t quant_trials,
                     std::uint64_t seed) {
  const auto result = mvsgd::run_codec_selftest(mask_trials, quant_trials, seed);
  for (const auto& msg : result.messages) std::cout << "  " << msg << "\n";
  std::cout << (result.mask_failures == 0 ? "PASS" : "FAIL") << " mask roundtrips: "
            << result.mask_trials - result.mask_failures << "/" << result.mask_trials << "\n";
  std::cout << (result.quant_failures == 0 ? "PASS" : "FAIL") << " quantizer roundtrips: "
            << result.quant_trials - result.quant_failures << "/" << result.quant_trials
            << "\n";
  return result.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majority-vote sparse distributed SGD simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  auto* run = app.add_subcommand("run", "Run a training experiment from a config file");
  run->add_option("--config", config_path, "Config file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--output", output, "Output prefix; overrides the config's output");

  mvsgd::TableSetup setup;
  std::string format = "both";
  auto* table = app.add_subcommand("table", "Print the per-scheme communication budgets");
  table->add_option("--phi", setup.phi, "Vote density")->capture_default_str();
  table->add_option("--phi-ad", setup.phi_ad, "Add-drop density")->capture_default_str();
  table->add_option("--q", setup.quantized_bits, "Bits per quantized value")
      ->capture_default_str();
  table->add_option("--workers", setup.workers, "Number of workers")->capture_default_str();
  table->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "both"}))
      ->capture_default_str();

  std::size_t mask_trials = 10000;
  std::size_t quant_trials = 1000;
  std::uint64_t seed = 1;
  auto* selftest = app.add_subcommand("codec-selftest", "Randomized codec roundtrips");
  selftest->add_option("--mask-trials", mask_trials)->capture_default_str();
  selftest->add_option("--quant-trials", quant_trials)->capture_default_str();
  selftest->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return run_command(config_path, output);
    if (*table) return table_command(setup, format);
    return selftest_command(mask_trials, quant_trials, seed);
  } catch (const std::exception& e) {
    std::cerr << "mvsgd: " << e.what() << "\n";
    return 2;
  }
}
