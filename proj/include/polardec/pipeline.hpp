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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polardec/alignment.hpp"
#include "polardec/blockmodel.hpp"
#include "polardec/config.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/io.hpp"
#include "polardec/validate.hpp"

namespace polardec {

enum class Stage {
  Ingest,
  Partition,
  Hierarchy,
  Decompose,
  Marginal,
  Align,
  Activity,
  Validate,
  Report,
};

inline constexpr std::array<Stage, 9> kStages{
    Stage::Ingest, Stage::Partition, Stage::Hierarchy, Stage::Decompose, Stage::Marginal,
    Stage::Align,  Stage::Activity,  Stage::Validate,  Stage::Report};

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);

struct StageOptions {
  std::optional<std::string> topic;  // restrict per-topic stages to one topic
  unsigned jobs = 1;
};

struct StageOutcome {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> messages;
  std::size_t refused = 0;      // artifacts recording a statistical refusal
  std::size_t input_errors = 0; // topics skipped for bad or degenerate input
  /// 1 on any input error, else 2 on any refusal, else 0.
  int exit_code() const;
  void merge(const StageOutcome& other);
};

/// Runs one stage over every configured snapshot (and topic). Throws
/// InputError when a prerequisite artifact is missing; the message names
/// the stage to run first.
StageOutcome run_stage(Stage stage, const RunConfig& config, const StageOptions& options = {});

/// Every stage in order. Topics that fail ingest are skipped downstream
/// and reflected in the exit code.
StageOutcome run_all(const RunConfig& config, const StageOptions& options = {});

// Artifact (de)serialization, shared with the report builder and tests.

Json partition_json(std::span<const std::string> nodes, const ModelSelection& selection,
                    const Partition& partition);
Partition partition_from_json(const Json& j, std::span<const std::string> nodes);

Json hierarchy_json(std::span<const std::string> nodes, const Partition& partition,
                    const HierarchyLabels& hierarchy);
HierarchyLabels hierarchy_from_json(const Json& j, std::span<const std::string> nodes);

Json nmi_json(const StratumAlignment& a, bool adjusted);
Json bootstrap_json(const BootstrapSummary& b);

/// One topic pair of `alignment.json`.
Json alignment_pair_json(std::string_view first, std::string_view second,
                         const StanceVectors& vectors, const AlignmentResult& point,
                         const BootstrapResult& boot, bool adjusted);

/// One topic of `validation.json`.
Json validation_topic_json(const Enrichment& enrichment, const PartyDistribution& parties,
                           std::optional<Group> left_group);

}  // namespace polardec
