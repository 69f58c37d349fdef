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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polardec/graph.hpp"
#include "polardec/types.hpp"

namespace polardec {

/// One planted-partition fit with k in {1, 2} blocks.
struct BlockModelFit {
  int k = 1;
  std::vector<std::uint8_t> labels;
  double description_length = 0.0;  // nats
  std::uint64_t seed = 0;
  bool converged = true;  // false if the move cap stopped the sweeps
  bool assortative = true;  // k = 2: denser within blocks than between
};

struct FitOptions {
  std::size_t moves_per_node = 100;  // move cap is moves_per_node * |V|
};

/// Fits the planted-partition model. For k = 2 the labels come from
/// merging adjacent blocks of non-isolated nodes down to two, each merge
/// lowering the many-block description length, then best-improvement
/// single-node moves until no move lowers it. Once the split is
/// assortative, moves that would make it disassortative are rejected.
/// Deterministic in `seed`. Throws InputError for graphs without edges or,
/// for k = 2, with fewer than two nodes.
BlockModelFit fit_planted_partition(const Graph& graph, int k, std::uint64_t seed,
                                    const FitOptions& options = {});

/// Description length of a given two-block labelling.
double planted_partition_dl(const Graph& graph, std::span<const std::uint8_t> labels);

struct ModelSelection {
  int k_star = 1;
  BlockModelFit best_k1;
  BlockModelFit best_k2;
  bool assortative() const { return k_star == 2; }
};

/// Sweeps k over {1, 2} with `runs_per_k` fits each and keeps the lowest
/// description length; only assortative k = 2 fits compete. A network
/// without assortative two-group structure selects k = 1.
ModelSelection select_model(const Graph& graph, std::size_t runs_per_k, std::uint64_t seed,
                            unsigned jobs = 1);

/// Per-node group membership with consensus frequencies.
struct Partition {
  std::vector<Group> group_of;
  std::vector<double> prob_a;
  bool assortative = false;
  std::optional<Group> left_group;
  std::size_t runs = 0;
  std::vector<std::string> warnings;

  std::size_t size(Group g) const;
  std::vector<Vertex> members(Group g) const;
};

/// Seed used for consensus run `run`, so single runs can be reproduced.
std::uint64_t consensus_run_seed(std::uint64_t seed, std::size_t run);

/// Aligns two-block labelings to the first one by maximal overlap (exact
/// 50/50 overlap: the smallest node keeps its run-0 side) and takes
/// per-node frequencies. Group A is run 0's block holding node 0; a node
/// with prob_a >= 0.5 belongs to A.
Partition consensus_from_labelings(std::span<const std::vector<std::uint8_t>> labelings);

/// Runs `runs` independent k = 2 fits and builds the consensus of the
/// assortative ones. Throws RefusalError if none is assortative or the
/// consensus leaves a group with fewer than two nodes.
Partition consensus_partition(const Graph& graph, std::size_t runs, std::uint64_t seed,
                              unsigned jobs = 1);

/// Trivial partition for a network that selected k = 1.
Partition non_assortative_partition(std::size_t num_nodes);

/// Marks as left-leaning the group holding the majority of left-party
/// candidates. Left unset (with a warning) if either group has no known
/// candidate or the left candidates split evenly.
Partition orient_groups(Partition partition, std::span<const std::string> node_names,
                        const std::map<std::string, Leaning>& affiliations);

}  // namespace polardec
