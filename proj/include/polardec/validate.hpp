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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "polardec/blockmodel.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/types.hpp"

namespace polardec {

struct Candidate {
  std::string party;
  Leaning leaning = Leaning::Other;
};

using CandidateRoster = std::map<std::string, Candidate>;

/// CSV rows "user,party,leaning" (header optional). Duplicate users raise
/// InputError.
CandidateRoster read_roster(std::istream& in);

std::map<std::string, Leaning> leanings(const CandidateRoster& roster);

/// gamma = P(candidate | core) / P(candidate | periphery), pooling both
/// groups. Unset (with `undefined` true) when the periphery holds no
/// candidates or either stratum is empty.
struct Enrichment {
  std::optional<double> gamma;
  bool undefined = false;
  std::uint64_t core_candidates = 0;
  std::uint64_t core_size = 0;
  std::uint64_t periphery_candidates = 0;
  std::uint64_t periphery_size = 0;
};

Enrichment candidate_enrichment(std::span<const std::string> nodes,
                                const HierarchyLabels& hierarchy, const CandidateRoster& roster);

/// Candidate counts per inferred group, by party and by leaning.
struct PartyDistribution {
  std::array<std::map<std::string, std::uint64_t>, 2> by_party;
  std::array<std::array<std::uint64_t, 3>, 2> by_leaning{};

  /// Share of `leaning` candidates that sit in `group`; unset if none exist.
  std::optional<double> share(Group group, Leaning leaning) const;
};

PartyDistribution party_distribution(std::span<const std::string> nodes,
                                     const Partition& partition, const CandidateRoster& roster);

}  // namespace polardec
