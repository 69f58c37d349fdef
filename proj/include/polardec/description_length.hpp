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

// Microcanonical description lengths (in nats) for the block-model
// families used by group and hierarchy inference. Every model encodes
//   - the node partition: log(N-1) for the block sizes plus the log
//     multinomial of assigning labels given the sizes,
//   - one edge count per edge bundle, uniform over [0, pairs],
//   - the placement of each bundle's edges among its pairs, log C(pairs, m).
// The one-block model (Erdos-Renyi) has no partition term and a single
// bundle.

namespace polardec {

/// log C(n, k); n and k may exceed 2^53 in principle but pair counts here
/// stay far below that.
double log_binomial(double n, double k);

/// One-block encoding of a graph with `num_nodes` nodes and `num_edges` edges.
double er_description_length(std::uint64_t num_nodes, std::uint64_t num_edges);

/// Cost of splitting N nodes into two labelled, non-empty blocks of sizes
/// n0 and n1.
double two_block_partition_dl(std::uint64_t n0, std::uint64_t n1);

/// Planted partition with two blocks: all within-block pairs share one
/// density, all between-block pairs another.
struct PlantedCounts {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t e_in = 0;
  std::uint64_t e_out = 0;
};
double planted_partition_dl(const PlantedCounts& c);
/// Strictly denser inside the blocks than between them (exact arithmetic).
bool assortative(const PlantedCounts& c);

/// Two-block core-periphery model with three bundles.
struct CorePeripheryCounts {
  std::uint64_t n_core = 0;
  std::uint64_t n_periphery = 0;
  std::uint64_t e_cc = 0;
  std::uint64_t e_cp = 0;
  std::uint64_t e_pp = 0;

  std::uint64_t pairs_cc() const;
  std::uint64_t pairs_cp() const { return n_core * n_periphery; }
  std::uint64_t pairs_pp() const;
};
double core_periphery_dl(const CorePeripheryCounts& c);

/// True iff rho_cc >= rho_cp >= rho_pp, comparing exact rationals. A bundle
/// with no possible pairs has no density and drops out of the comparison.
bool hub_spoke_ordered(const CorePeripheryCounts& c);

}  // namespace polardec
