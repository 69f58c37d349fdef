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
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/description_length.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/random.hpp"
#include "polardec/synthetic.hpp"
#include "polardec/types.hpp"

using namespace polardec;

namespace {

// K_5 on nodes 0..4; leaf 5 + i hangs off core node i % 5.
Graph clique_with_leaves() {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 5; ++u) {
    for (Vertex v = u + 1; v < 5; ++v) edges.push_back({u, v});
  }
  for (Vertex i = 0; i < 10; ++i) edges.push_back({i % 5, 5 + i});
  return Graph::from_edges(15, std::move(edges));
}

std::vector<Stratum> mask_strata(std::uint32_t core_mask, std::size_t n) {
  std::vector<Stratum> s(n);
  for (std::size_t v = 0; v < n; ++v) {
    s[v] = ((core_mask >> v) & 1u) ? Stratum::Core : Stratum::Periphery;
  }
  return s;
}

// Bundle tallies by checking every pair.
CorePeripheryCounts brute_counts(const Graph& g, const std::vector<Stratum>& s) {
  CorePeripheryCounts c;
  for (Vertex v = 0; v < g.num_nodes(); ++v) {
    (s[v] == Stratum::Core ? c.n_core : c.n_periphery)++;
  }
  for (Vertex u = 0; u < g.num_nodes(); ++u) {
    for (Vertex v = u + 1; v < g.num_nodes(); ++v) {
      if (!g.has_edge(u, v)) continue;
      const int cores = (s[u] == Stratum::Core) + (s[v] == Stratum::Core);
      (cores == 2 ? c.e_cc : cores == 1 ? c.e_cp : c.e_pp)++;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("clique with leaves: the fit reaches the exhaustive constrained optimum") {
  const Graph g = clique_with_leaves();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask + 1 < (1u << 15); ++mask) {
    const auto c = brute_counts(g, mask_strata(mask, 15));
    if (!hub_spoke_ordered(c)) continue;
    const double dl = core_periphery_dl(c);
    if (dl < best - 1e-12) {
      best = dl;
      best_mask = mask;
    }
  }
  CHECK(best_mask == 0x1fu);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    CorePeripheryFit fit = fit_hub_spoke(g, seed);
    CHECK(fit.description_length == doctest::Approx(best).epsilon(1e-12));
    CHECK(fit.core() == std::vector<Vertex>{0, 1, 2, 3, 4});
    CHECK(fit.counts.e_cc == 10);
    CHECK(fit.counts.e_cp == 10);
    CHECK(fit.counts.e_pp == 0);
    CHECK_FALSE(fit.weak);
  }
  HierarchyTest t = test_hierarchy(g, 5, 1);
  CHECK(t.significant);
  CHECK(t.er_dl == doctest::Approx(er_description_length(15, 20)));
  CHECK(t.best.description_length < t.er_dl);
}

TEST_CASE("bundle tallies match pairwise counting") {
  Rng rng(21);
  const Graph g = erdos_renyi(40, 0.2, rng);
  for (int i = 0; i < 20; ++i) {
    std::vector<Stratum> s(40);
    for (auto& x : s) x = uniform01(rng) < 0.3 ? Stratum::Core : Stratum::Periphery;
    const auto got = tally_core_periphery(g, s);
    const auto want = brute_counts(g, s);
    CHECK(got.n_core == want.n_core);
    CHECK(got.e_cc == want.e_cc);
    CHECK(got.e_cp == want.e_cp);
    CHECK(got.e_pp == want.e_pp);
    if (want.n_core > 0 && want.n_periphery > 0) {
      CHECK(core_periphery_dl(g, s) == doctest::Approx(core_periphery_dl(want)));
    }
  }
}

TEST_CASE("densities leave empty bundles undefined") {
  Densities d = densities(CorePeripheryCounts{1, 4, 0, 3, 2});
  CHECK(std::isnan(d.cc));
  CHECK(d.cp == doctest::Approx(0.75));
  CHECK(d.pp == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("fits respect the hub-and-spoke ordering") {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const Graph g = erdos_renyi(50, 0.08, rng);
    auto fit = fit_hub_spoke(g, static_cast<std::uint64_t>(i));
    CHECK(hub_spoke_ordered(fit.counts));
    CHECK(fit.description_length == doctest::Approx(core_periphery_dl(g, fit.labels)));
  }
}

TEST_CASE("significance separates planted cores from random graphs") {
  Rng rng(13);
  const auto planted = planted_core_periphery(20, 150, {0.4, 0.1, 0.005}, rng);
  CHECK(test_hierarchy(planted.graph, 10, 2).significant);
  const Graph er = erdos_renyi(170, 0.02, rng);
  CHECK_FALSE(test_hierarchy(er, 10, 2).significant);
}

TEST_CASE("stratum consensus flips disagreeing runs") {
  const auto C = Stratum::Core;
  const auto P = Stratum::Periphery;
  std::vector<std::vector<Stratum>> runs{{C, C, P, P}, {P, P, C, C}, {C, P, P, P}};
  StratumConsensus s = consensus_strata(runs);
  CHECK(s.prob_core == std::vector<double>{1.0, 2.0 / 3.0, 0.0, 0.0});
  CHECK(s.labels == std::vector<Stratum>{C, C, P, P});
  std::vector<std::vector<Stratum>> split{{C, P}, {P, C}, {P, C}};
  // The second and third runs flip to match run 0.
  CHECK(consensus_strata(split).prob_core == std::vector<double>{1.0, 0.0});
}

TEST_CASE("group hierarchies on a planted two-group graph") {
  Rng rng(17);
  const auto h = planted_hierarchy({15, 15}, {100, 100}, {0.5, 0.1, 0.01}, 0.001, rng);
  Partition p;
  p.group_of = h.group;
  p.prob_a.resize(h.group.size());
  for (std::size_t v = 0; v < h.group.size(); ++v) p.prob_a[v] = h.group[v] == Group::A;
  p.assortative = true;
  HierarchyLabels labels = consensus_hierarchy(p, h.graph, 10, 3);
  CHECK(labels.significant());
  std::size_t agree = 0;
  for (std::size_t v = 0; v < h.stratum.size(); ++v) agree += labels.stratum[v] == h.stratum[v];
  CHECK(agree >= h.stratum.size() - 10);
  CHECK(labels.groups[0].size == 115);
  HierarchyLabels parallel = consensus_hierarchy(p, h.graph, 10, 3, 8);
  CHECK(parallel.prob_core == labels.prob_core);

  CHECK_THROWS_AS(consensus_hierarchy(non_assortative_partition(h.group.size()), h.graph, 2, 1),
                  RefusalError);
}

TEST_CASE("10-clique with 40 pendant leaves: the core is the clique") {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 10; ++u) {
    for (Vertex v = u + 1; v < 10; ++v) edges.push_back({u, v});
  }
  for (Vertex i = 0; i < 40; ++i) edges.push_back({i % 10, 10 + i});
  const Graph g = Graph::from_edges(50, std::move(edges));
  HierarchyTest t = test_hierarchy(g, 5, 4);
  CHECK(t.significant);
  CHECK(t.best.core() == std::vector<Vertex>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("star: hub-and-spoke beats the one-block encoding") {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= 20; ++v) edges.push_back({0, v});
  const Graph star = Graph::from_edges(21, std::move(edges));
  // Core {hub}: partition log 20 + log 21; bundles cc (0 pairs), cp (20 of
  // 20 linked) and pp (0 of 190) cost log 1, log 21 and log 191.
  const double hub_spoke = std::log(20.0) + std::log(21.0) + std::log(21.0) + std::log(191.0);
  const double one_block = std::log(211.0) + std::lgamma(211.0) - std::lgamma(21.0) -
                           std::lgamma(191.0);
  HierarchyTest t = test_hierarchy(star, 5, 1);
  CHECK(t.er_dl == doctest::Approx(one_block).epsilon(1e-11));
  CHECK(t.best.description_length == doctest::Approx(hub_spoke).epsilon(1e-11));
  CHECK(t.best.core() == std::vector<Vertex>{0});
  CHECK(t.significant);
}

TEST_CASE("random graphs rarely look hierarchical") {
  std::size_t er_wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng(900, {seed});
    const Graph g = erdos_renyi(200, 0.05, rng);
    er_wins += !test_hierarchy(g, 5, seed).significant;
  }
  CHECK(er_wins >= 95);
}

TEST_CASE("a half-core node is labelled periphery") {
  const auto C = Stratum::Core;
  const auto P = Stratum::Periphery;
  // Runs agree on nodes 0-3; node 4 is core in half of them.
  std::vector<std::vector<Stratum>> runs{{C, C, P, P, C}, {C, C, P, P, P},
                                         {C, C, P, P, C}, {C, C, P, P, P}};
  StratumConsensus s = consensus_strata(runs);
  CHECK(s.prob_core[4] == 0.5);
  CHECK(s.labels[4] == P);
}
