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
#include <optional>
#include <span>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/graph.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/random.hpp"
#include "polardec/types.hpp"

namespace polardec {

/// Edge tallies of one group, split by hierarchy.
struct GroupCounts {
  std::uint64_t core_core = 0;
  std::uint64_t core_periphery = 0;
  std::uint64_t periphery_periphery = 0;
  std::uint64_t size = 0;
  std::uint64_t core_size = 0;
  // Cross-group edges incident to this group's core / periphery members.
  std::array<std::uint64_t, 2> cross{0, 0};

  std::uint64_t internal() const { return core_core + core_periphery + periphery_periphery; }
  std::uint64_t periphery_size() const { return size - core_size; }
  std::uint64_t stratum_size(Stratum s) const {
    return s == Stratum::Core ? core_size : periphery_size();
  }
  std::uint64_t within(Stratum s) const {
    return s == Stratum::Core ? core_core : periphery_periphery;
  }
};

struct LinkCounts {
  std::array<GroupCounts, 2> groups;
  std::uint64_t between = 0;
  bool hierarchical = true;  // false: group-level tallies only

  const GroupCounts& operator[](Group g) const { return groups[index(g)]; }
  GroupCounts& operator[](Group g) { return groups[index(g)]; }
};

/// Exact tallies of every edge into its group/hierarchy bucket.
LinkCounts count_links(const Graph& graph, std::span<const Group> groups,
                       std::span<const Stratum> strata);
LinkCounts count_links(const Graph& graph, const Partition& partition,
                       const HierarchyLabels& hierarchy);
/// Group-level tallies when a hierarchy is unavailable; every node counts
/// as periphery and `hierarchical` is false.
LinkCounts count_group_links(const Graph& graph, const Partition& partition);

/// Internal link density of a group, internal / C(n, 2).
double internal_density(const GroupCounts& g);
/// Between-group link density, E / (n_A n_B).
double external_density(const LinkCounts& c);
/// i_A + i_B + 2 e_AB.
double aei_denominator(const LinkCounts& c);

/// Adaptive EI-index (i_A + i_B - 2 e_AB) / (i_A + i_B + 2 e_AB). Throws
/// std::domain_error if a group has fewer than two nodes or the graph has
/// no edges.
double aei(const LinkCounts& counts);

struct DecompositionResult {
  // components[group][stratum bucket]: 0 core-core, 1 core-periphery,
  // 2 periphery-periphery, each normalized by alpha.
  std::array<std::array<double, 3>, 2> components{};
  std::array<double, 2> group_share{};  // sum of a group's three components
  double bridge = 0.0;                  // 2 e_AB / alpha
  double aei = 0.0;
  double alpha = 0.0;
  std::array<std::uint64_t, 2> sizes{};
  std::array<std::uint64_t, 2> core_sizes{};
  bool hierarchical = true;
};

DecompositionResult decompose(const LinkCounts& counts);

struct MarginalEntry {
  Group group = Group::A;
  Stratum stratum = Stratum::Core;
  double formula = 0.0;  // linearized change in AEI with alpha held fixed
  double oracle = 0.0;   // exact AEI change, averaged over rounded realizations
  double mean_within = 0.0;  // <k_s>: links to the node's own stratum
  double mean_cp = 0.0;      // <k_cp>: links to the other stratum of its group
  double mean_out = 0.0;     // <k_out>: links to the other group
  std::uint64_t stratum_size = 0;
};

/// (2/alpha) ((within + cp) / n_X^2 - out / (n_A n_B)).
double marginal_formula(const LinkCounts& counts, Group group, double within, double cp,
                        double out);

/// AEI after adding one node to (group, stratum) with the given integer
/// link counts.
double aei_with_added_node(const LinkCounts& counts, Group group, Stratum stratum,
                           std::uint64_t within, std::uint64_t cp, std::uint64_t out);

/// Marginal polarization of an average node of (group, stratum): the
/// linearized formula beside the exact recomputation, which realizes the
/// fractional mean degrees by randomized rounding over `draws` draws.
MarginalEntry marginal(const LinkCounts& counts, Group group, Stratum stratum,
                       std::uint64_t seed, std::size_t draws = 32);

/// Size-weighted mean of the entries' values for one stratum; weights are
/// the stratum sizes.
double weighted_mean_marginal(std::span<const MarginalEntry> entries, Stratum stratum,
                              bool use_oracle = false);

/// Degree-preserving double-edge swaps; swaps creating self-loops or
/// parallel edges are rejected.
Graph rewire_degree_preserving(const Graph& graph, Rng& rng, std::size_t swaps_per_edge = 10);

struct PipelineOptions {
  std::size_t runs_per_k = 10;
  std::size_t consensus_runs = 100;
};

/// Group-level AEI of the full inference pipeline (model selection,
/// consensus partition). Zero when the graph selects one block.
double pipeline_aei(const Graph& graph, const PipelineOptions& options, std::uint64_t seed,
                    unsigned jobs = 1);

struct NullOptions {
  std::size_t shuffles = 100;
  std::size_t swaps_per_edge = 10;
  PipelineOptions pipeline;
};

struct NullAdjusted {
  double observed = 0.0;
  double null_mean = 0.0;
  std::optional<double> explained_fraction;  // unset when observed <= 0
  std::vector<double> null_values;
  std::size_t null_assortative = 0;
};

/// Share of the observed AEI reproduced by degree-preserving rewirings,
/// mean(null) / observed clamped to [0, 1].
NullAdjusted null_adjusted_aei(const Graph& graph, double observed_aei, const NullOptions& options,
                               std::uint64_t seed, unsigned jobs = 1);

/// As above, with the observed AEI from the same pipeline. Throws
/// RefusalError if the observed graph selects one block.
NullAdjusted null_adjusted_aei(const Graph& graph, const NullOptions& options, std::uint64_t seed,
                               unsigned jobs = 1);

}  // namespace polardec
