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
#include "polardec/validate.hpp"

#include <istream>

#include "polardec/ingest.hpp"

namespace polardec {

CandidateRoster read_roster(std::istream& in) {
  CandidateRoster roster;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_delimited(line, line.find('\t') != std::string::npos ? '\t' : ',');
    if (fields.size() < 3) {
      throw InputError("roster line " + std::to_string(line_no) + ": expected user,party,leaning");
    }
    if (line_no == 1 && fields[0] == "user") continue;
    Candidate c{fields[1], parse_leaning(fields[2])};
    if (!roster.emplace(fields[0], std::move(c)).second) {
      throw InputError("roster line " + std::to_string(line_no) + ": duplicate user " + fields[0]);
    }
  }
  return roster;
}

std::map<std::string, Leaning> leanings(const CandidateRoster& roster) {
  std::map<std::string, Leaning> out;
  for (const auto& [user, c] : roster) out.emplace(user, c.leaning);
  return out;
}

Enrichment candidate_enrichment(std::span<const std::string> nodes,
                                const HierarchyLabels& hierarchy, const CandidateRoster& roster) {
  Enrichment e;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const bool candidate = roster.count(nodes[v]) > 0;
    if (hierarchy.stratum[v] == Stratum::Core) {
      ++e.core_size;
      e.core_candidates += candidate;
    } else {
      ++e.periphery_size;
      e.periphery_candidates += candidate;
    }
  }
  if (e.core_size == 0 || e.periphery_size == 0 || e.periphery_candidates == 0) {
    e.undefined = true;
    return e;
  }
  const double core_rate =
      static_cast<double>(e.core_candidates) / static_cast<double>(e.core_size);
  const double periphery_rate =
      static_cast<double>(e.periphery_candidates) / static_cast<double>(e.periphery_size);
  e.gamma = core_rate / periphery_rate;
  return e;
}

std::optional<double> PartyDistribution::share(Group group, Leaning leaning) const {
  const auto l = static_cast<std::size_t>(leaning);
  const auto total = by_leaning[0][l] + by_leaning[1][l];
  if (total == 0) return std::nullopt;
  return static_cast<double>(by_leaning[index(group)][l]) / static_cast<double>(total);
}

PartyDistribution party_distribution(std::span<const std::string> nodes,
                                     const Partition& partition, const CandidateRoster& roster) {
  PartyDistribution d;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    auto it = roster.find(nodes[v]);
    if (it == roster.end()) continue;
    const auto g = index(partition.group_of[v]);
    ++d.by_party[g][it->second.party];
    ++d.by_leaning[g][static_cast<std::size_t>(it->second.leaning)];
  }
  return d;
}

}  // namespace polardec
