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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polardec/graph.hpp"
#include "polardec/io.hpp"
#include "polardec/random.hpp"
#include "polardec/types.hpp"

namespace polardec {

/// G(n, p) by independent pair draws.
Graph erdos_renyi(std::size_t n, double p, Rng& rng);

/// Two planted blocks; nodes [0, n_a) form block 0.
struct PlantedPartition {
  Graph graph;
  std::vector<std::uint8_t> block;
};
PlantedPartition planted_partition(std::size_t n_a, std::size_t n_b, double p_in, double p_out,
                                   Rng& rng);

struct BundleDensities {
  double cc = 0.0;
  double cp = 0.0;
  double pp = 0.0;
};

/// One core-periphery block; nodes [0, n_core) are the core.
struct PlantedCorePeriphery {
  Graph graph;
  std::vector<Stratum> stratum;
};
PlantedCorePeriphery planted_core_periphery(std::size_t n_core, std::size_t n_periphery,
                                            const BundleDensities& p, Rng& rng);

/// Two groups, each with its own core and periphery. Node order: A core,
/// A periphery, B core, B periphery.
struct PlantedHierarchy {
  Graph graph;
  std::vector<Group> group;
  std::vector<Stratum> stratum;
};
PlantedHierarchy planted_hierarchy(std::array<std::size_t, 2> core,
                                   std::array<std::size_t, 2> periphery,
                                   const BundleDensities& within, double p_cross, Rng& rng);

struct CorpusSnapshot {
  std::string id;
  std::chrono::sys_days start;
  int days = 84;
};

/// Fixture corpus: two topics per snapshot over one shared user base.
/// Elites keep their group across topics; a mass user keeps it with
/// probability `mass_alignment` and otherwise draws a group uniformly.
struct CorpusSpec {
  std::vector<CorpusSnapshot> snapshots;
  std::array<std::string, 2> topics{"climate", "economy"};
  std::array<std::size_t, 2> core{25, 20};
  std::array<std::size_t, 2> periphery{200, 150};
  BundleDensities within{0.3, 0.08, 0.02};
  double p_cross = 0.001;
  double mass_alignment = 0.7;
  double toward_core = 0.85;   // share of core-periphery records endorsing the core
  double core_candidates = 0.4;
  double periphery_candidates = 0.02;
  double burst_share = 0.3;    // records concentrated three weeks before the window end
  std::uint64_t seed = 20260101;

  static CorpusSpec standard();
};

/// Writes `<id>.csv` interaction files, `roster_<id>.csv`, the planted
/// labels `planted_<id>.csv`, `polardec.conf`
/// and `expected.json` (planted AEI per snapshot and topic, computed from
/// exact counts on the networks the pipeline will build) into `dir`.
Json write_corpus(const CorpusSpec& spec, const std::filesystem::path& dir);

}  // namespace polardec
