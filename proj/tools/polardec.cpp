/*
 * Copyright 2026 The polardec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// polardec command-line driver.

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "polardec/config.hpp"
#include "polardec/pipeline.hpp"
#include "polardec/types.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization decomposition of interaction networks", "polardec"};
  app.set_version_flag("--version", "polardec 1.0.0");

  std::string stage_name;
  std::string config_path;
  std::optional<std::string> topic;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  bool quiet = false;

  std::string stages = "all";
  for (auto s : polardec::kStages) stages += "|" + std::string(polardec::to_string(s));
  app.add_option("stage", stage_name, "Stage to run: " + stages)->required();
  app.add_option("--config,-c", config_path, "Configuration file (key = value)")->required();
  app.add_option("--topic,-t", topic, "Restrict per-topic stages to one topic");
  app.add_option("--seed,-s", seed, "Override the configured seed");
  app.add_option("--jobs,-j", jobs, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--quiet,-q", quiet, "Only print errors");

  // Accept "polardec run <stage> ..." as well.
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front() == "run") args.erase(args.begin());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    polardec::RunConfig config = polardec::load_config(config_path);
    if (seed) config.seed = *seed;
    polardec::StageOptions options;
    options.topic = topic;
    options.jobs = jobs ? *jobs : config.jobs;
    if (options.jobs == 0) options.jobs = 1;

    polardec::StageOutcome outcome;
    if (stage_name == "all") {
      outcome = polardec::run_all(config, options);
    } else if (auto stage = polardec::parse_stage(stage_name)) {
      outcome = polardec::run_stage(*stage, config, options);
    } else {
      std::cerr << "polardec: unknown stage '" << stage_name << "' (expected " << stages << ")\n";
      return kInputError;
    }
    for (const auto& m : outcome.messages) std::cerr << "polardec: " << m << "\n";
    if (!quiet) {
      for (const auto& p : outcome.written) std::cout << p.string() << "\n";
    }
    return outcome.exit_code();
  } catch (const polardec::InputError& e) {
    std::cerr << "polardec: " << e.what() << "\n";
    return kInputError;
  } catch (const polardec::RefusalError& e) {
    std::cerr << "polardec: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polardec: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
