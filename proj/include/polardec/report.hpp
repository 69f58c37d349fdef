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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "polardec/io.hpp"

namespace polardec {

/// Stage artifacts of one topic; null members are absent artifacts.
struct TopicArtifacts {
  std::string topic;
  Json partition;
  Json hierarchy;
  Json decomposition;
  Json null_model;
  Json marginal;
  Json amplification;
  std::string activity_csv;  // path relative to the output directory
};

struct SnapshotArtifacts {
  std::string id;
  std::vector<TopicArtifacts> topics;
  Json alignment;
  Json validation;
  std::map<std::string, std::string> failed_topics;  // topic -> ingest error
};

/// Consolidated report: structural polarization with null share,
/// pairwise alignment with per-snapshot means, decomposition spectra,
/// marginal summaries, activity pointers, enrichment, cross-snapshot deltas.
Json assemble_report(std::span<const SnapshotArtifacts> snapshots, bool adjusted_nmi);

/// One RFC 4180 row per (snapshot, topic).
std::string report_csv(const Json& report);

/// The published report schema (JSON Schema subset: type, required,
/// properties, items, enum, minimum, maximum).
const Json& report_schema();

/// Violations of `report_schema()`; empty when the report conforms.
std::vector<std::string> validate_report(const Json& report);
std::vector<std::string> validate_against(const Json& value, const Json& schema,
                                          const std::string& where = "$");

}  // namespace polardec
