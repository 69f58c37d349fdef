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
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polardec/ingest.hpp"

namespace polardec {

struct SnapshotConfig {
  std::string id;
  std::vector<std::filesystem::path> inputs;
  std::optional<TimeWindow> window;
  std::optional<std::filesystem::path> roster;
};

/// Pipeline configuration. Defaults follow the reference analysis: 100
/// consensus runs, 500 bootstrap samples, 100 null-model shuffles.
struct RunConfig {
  std::filesystem::path output_dir = "polardec-out";
  std::uint64_t seed = 1;
  std::size_t runs = 100;
  std::size_t runs_per_k = 10;
  std::size_t bootstrap_samples = 500;
  std::size_t shuffles = 100;
  std::size_t null_runs = 100;
  std::size_t null_runs_per_k = 10;
  std::size_t swaps_per_edge = 10;
  std::size_t marginal_draws = 32;
  std::size_t min_nodes = 10;
  std::size_t min_overlap = 10;
  int smoothing_days = 7;
  bool strict = false;
  bool adjusted_nmi = true;
  char delimiter = 0;  // 0 = auto
  unsigned jobs = 1;
  std::vector<std::string> topics;  // empty = every topic found in the input
  std::vector<SnapshotConfig> snapshots;

  const SnapshotConfig& snapshot(const std::string& id) const;
};

/// Flat "key = value" text; '#' starts a comment. Relative paths resolve
/// against `base_dir`. Unknown keys raise InputError.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Stable hash of every setting that can change outputs (jobs excluded).
std::string config_hash(const RunConfig& config);

}  // namespace polardec
