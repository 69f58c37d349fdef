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
#include <span>
#include <string>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/description_length.hpp"
#include "polardec/graph.hpp"
#include "polardec/types.hpp"

namespace polardec {

/// Observed link densities per bundle; NaN where a bundle has no pairs.
struct Densities {
  double cc;
  double cp;
  double pp;
};
Densities densities(const CorePeripheryCounts& c);

CorePeripheryCounts tally_core_periphery(const Graph& graph, std::span<const Stratum> labels);
double core_periphery_dl(const Graph& graph, std::span<const Stratum> labels);

/// Hub-and-spoke core-periphery fit within one group.
struct CorePeripheryFit {
  std::vector<Stratum> labels;
  CorePeripheryCounts counts;
  Densities densities{};
  double description_length = 0.0;
  std::uint64_t seed = 0;
  bool weak = false;  // no density contrast between bundles
  bool converged = true;

  std::vector<Vertex> core() const;
  std::vector<Vertex> periphery() const;
};

/// Two-block fit restricted to rho_cc >= rho_cp >= rho_pp. Starts from the
/// best ordered degree-prefix core and applies single-node moves that keep
/// the ordering and lower the description length. Deterministic in `seed`
/// (which only breaks degree ties and orders the sweeps). Needs >= 2 nodes.
CorePeripheryFit fit_hub_spoke(const Graph& subgraph, std::uint64_t seed,
                               const FitOptions& options = {});

/// One-block (Erdos-Renyi) description length of a graph; closed form.
double er_description_length(const Graph& graph);

struct HierarchyTest {
  bool significant = false;
  CorePeripheryFit best;
  double er_dl = 0.0;
};

/// Significant iff the best of `runs` hub-and-spoke fits encodes the graph
/// in fewer nats than the Erdos-Renyi null.
HierarchyTest test_hierarchy(const Graph& subgraph, std::size_t runs, std::uint64_t seed,
                             unsigned jobs = 1);

struct StratumConsensus {
  std::vector<Stratum> labels;
  std::vector<double> prob_core;
};

/// Aligns runs to run 0 (a run is flipped when flipping agrees more) and
/// takes per-node core frequencies. prob_core = 0.5 counts as periphery.
StratumConsensus consensus_strata(std::span<const std::vector<Stratum>> runs);

struct GroupHierarchy {
  bool significant = false;
  double dl_core_periphery = 0.0;
  double dl_er = 0.0;
  Densities densities{};  // observed on the consensus labels
  std::size_t size = 0;
  std::size_t core_size = 0;
  bool weak = false;
  std::vector<std::string> warnings;
};

/// Core/periphery labels for every node, each within its own group.
struct HierarchyLabels {
  std::vector<Stratum> stratum;
  std::vector<double> prob_core;
  std::array<GroupHierarchy, 2> groups;
  std::size_t runs = 0;

  bool significant() const { return groups[0].significant && groups[1].significant; }
};

/// Per group: fits `runs` hub-and-spoke models on the group-induced
/// subgraph (cross-group edges excluded), builds the consensus labels and
/// the significance verdict. Throws RefusalError for a non-assortative
/// partition.
HierarchyLabels consensus_hierarchy(const Partition& partition, const Graph& graph,
                                    std::size_t runs, std::uint64_t seed, unsigned jobs = 1);

}  // namespace polardec
