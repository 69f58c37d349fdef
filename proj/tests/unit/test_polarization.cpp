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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polardec/graph.hpp"
#include "polardec/polarization.hpp"
#include "polardec/random.hpp"
#include "polardec/synthetic.hpp"
#include "polardec/types.hpp"

using namespace polardec;

namespace {

void add_clique(std::vector<Edge>& edges, Vertex first, Vertex size) {
  for (Vertex u = first; u < first + size; ++u) {
    for (Vertex v = u + 1; v < first + size; ++v) edges.push_back({u, v});
  }
}

std::vector<Group> halves(std::size_t n_a, std::size_t n_b) {
  std::vector<Group> g(n_a, Group::A);
  g.resize(n_a + n_b, Group::B);
  return g;
}

std::vector<Stratum> all_periphery(std::size_t n) {
  return std::vector<Stratum>(n, Stratum::Periphery);
}

// AEI from pairwise edge checks and explicit densities.
double brute_aei(const Graph& g, const std::vector<Group>& group) {
  double in[2] = {0, 0}, size[2] = {0, 0}, out = 0;
  for (Vertex v = 0; v < g.num_nodes(); ++v) size[index(group[v])] += 1;
  for (Vertex u = 0; u < g.num_nodes(); ++u) {
    for (Vertex v = u + 1; v < g.num_nodes(); ++v) {
      if (!g.has_edge(u, v)) continue;
      if (group[u] == group[v]) {
        in[index(group[u])] += 1;
      } else {
        out += 1;
      }
    }
  }
  const double ia = in[0] / (size[0] * (size[0] - 1) / 2);
  const double ib = in[1] / (size[1] * (size[1] - 1) / 2);
  const double e = out / (size[0] * size[1]);
  return (ia + ib - 2 * e) / (ia + ib + 2 * e);
}

}  // namespace

TEST_CASE("AEI boundary cases") {
  std::vector<Edge> edges;
  add_clique(edges, 0, 5);
  add_clique(edges, 5, 7);
  Graph disjoint = Graph::from_edges(12, edges);
  CHECK(aei(count_links(disjoint, halves(5, 7), all_periphery(12))) == 1.0);

  std::vector<Edge> bipartite;
  for (Vertex u = 0; u < 4; ++u) {
    for (Vertex v = 4; v < 10; ++v) bipartite.push_back({u, v});
  }
  Graph cross = Graph::from_edges(10, bipartite);
  CHECK(aei(count_links(cross, halves(4, 6), all_periphery(10))) == -1.0);

  // Two K_4 and one bridge: (1 + 1 - 2/16) / (1 + 1 + 2/16) = 15/17.
  std::vector<Edge> k4s;
  add_clique(k4s, 0, 4);
  add_clique(k4s, 4, 4);
  k4s.push_back({3, 4});
  Graph bridged = Graph::from_edges(8, k4s);
  const double value = aei(count_links(bridged, halves(4, 4), all_periphery(8)));
  CHECK(std::abs(value - 15.0 / 17.0) <= 1e-12 * 15.0 / 17.0);
}

TEST_CASE("AEI domain errors") {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(aei(count_links(g, halves(1, 3), all_periphery(4))), std::domain_error);
  Graph empty = Graph::from_edges(4, {});
  CHECK_THROWS_AS(aei(count_links(empty, halves(2, 2), all_periphery(4))), std::domain_error);
}

TEST_CASE("link tallies match brute-force pair checks") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + uniform_index(rng, 40);
    const Graph g = erdos_renyi(n, 0.15, rng);
    std::vector<Group> group(n);
    std::vector<Stratum> strata(n);
    for (std::size_t v = 0; v < n; ++v) {
      group[v] = v < 2 ? Group::A : v < 4 ? Group::B : (rng() & 1 ? Group::A : Group::B);
      strata[v] = uniform01(rng) < 0.25 ? Stratum::Core : Stratum::Periphery;
    }
    const LinkCounts c = count_links(g, group, strata);
    std::uint64_t bucket[2][3] = {{0, 0, 0}, {0, 0, 0}};
    std::uint64_t cross[2][2] = {{0, 0}, {0, 0}};
    std::uint64_t between = 0;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) continue;
        if (group[u] != group[v]) {
          ++between;
          ++cross[index(group[u])][index(strata[u])];
          ++cross[index(group[v])][index(strata[v])];
          continue;
        }
        const int cores = (strata[u] == Stratum::Core) + (strata[v] == Stratum::Core);
        ++bucket[index(group[u])][cores == 2 ? 0 : cores == 1 ? 1 : 2];
      }
    }
    CHECK(c.between == between);
    for (Group x : {Group::A, Group::B}) {
      const auto& gc = c[x];
      CHECK(gc.core_core == bucket[index(x)][0]);
      CHECK(gc.core_periphery == bucket[index(x)][1]);
      CHECK(gc.periphery_periphery == bucket[index(x)][2]);
      CHECK(gc.cross[0] == cross[index(x)][0]);
      CHECK(gc.cross[1] == cross[index(x)][1]);
    }
    CHECK(aei(c) == doctest::Approx(brute_aei(g, group)).epsilon(1e-12));
  }
}

TEST_CASE("decomposition sums to the AEI") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + uniform_index(rng, 60);
    const Graph g = erdos_renyi(n, 0.05 + 0.3 * uniform01(rng), rng);
    std::vector<Group> group(n);
    std::vector<Stratum> strata(n);
    for (std::size_t v = 0; v < n; ++v) {
      group[v] = v < 2 ? Group::A : v < 4 ? Group::B : (rng() & 1 ? Group::A : Group::B);
      strata[v] = rng() & 1 ? Stratum::Core : Stratum::Periphery;
    }
    const LinkCounts c = count_links(g, group, strata);
    if (c.between + c[Group::A].internal() + c[Group::B].internal() == 0) continue;
    const DecompositionResult d = decompose(c);
    double sum = -d.bridge;
    for (const auto& comp : d.components) {
      for (double x : comp) sum += x;
    }
    CHECK(std::abs(sum - d.aei) <= 1e-12 * std::max(1.0, std::abs(d.aei)));
    CHECK(d.group_share[0] + d.group_share[1] + d.bridge == doctest::Approx(1.0));
  }
}

TEST_CASE("decomposition of a hand-counted graph") {
  // Group A: nodes 0-3, core {0, 1}; group B: nodes 4-6, core {4}.
  Graph g = Graph::from_edges(7, {{0, 1}, {0, 2}, {2, 3}, {4, 5}, {5, 6}, {3, 6}});
  std::vector<Group> group{Group::A, Group::A, Group::A, Group::A, Group::B, Group::B, Group::B};
  const auto C = Stratum::Core;
  const auto P = Stratum::Periphery;
  LinkCounts c = count_links(g, group, std::vector<Stratum>{C, C, P, P, C, P, P});
  // i_A = 3/6, i_B = 2/3, e = 1/12; alpha = 1/2 + 2/3 + 1/6 = 4/3.
  DecompositionResult d = decompose(c);
  CHECK(d.alpha == doctest::Approx(4.0 / 3.0));
  CHECK(d.components[0][0] == doctest::Approx((1.0 / 6.0) / (4.0 / 3.0)));
  CHECK(d.components[0][1] == doctest::Approx((1.0 / 6.0) / (4.0 / 3.0)));
  CHECK(d.components[0][2] == doctest::Approx((1.0 / 6.0) / (4.0 / 3.0)));
  CHECK(d.components[1][0] == 0.0);
  CHECK(d.components[1][1] == doctest::Approx((1.0 / 3.0) / (4.0 / 3.0)));
  CHECK(d.components[1][2] == doctest::Approx((1.0 / 3.0) / (4.0 / 3.0)));
  CHECK(d.bridge == doctest::Approx(0.125));
  CHECK(d.aei == doctest::Approx((7.0 / 6.0 - 1.0 / 6.0) / (4.0 / 3.0)));
  CHECK(c[Group::A].cross == std::array<std::uint64_t, 2>{0, 1});
}

TEST_CASE("adding a node matches recounting the extended graph") {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 30;
    const Graph g = erdos_renyi(n, 0.2, rng);
    std::vector<Group> group = halves(15, 15);
    std::vector<Stratum> strata(n);
    for (auto& s : strata) s = uniform01(rng) < 0.3 ? Stratum::Core : Stratum::Periphery;
    const Group x = rng() & 1 ? Group::A : Group::B;
    const Stratum s = rng() & 1 ? Stratum::Core : Stratum::Periphery;
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    std::uint64_t within = 0, cp = 0, out = 0;
    const auto added = static_cast<Vertex>(n);
    for (Vertex v = 0; v < n; ++v) {
      if (uniform01(rng) >= 0.3) continue;
      edges.push_back({v, added});
      if (group[v] != x) {
        ++out;
      } else if (strata[v] == s) {
        ++within;
      } else {
        ++cp;
      }
    }
    const Graph extended = Graph::from_edges(n + 1, edges);
    auto ext_group = group;
    ext_group.push_back(x);
    auto ext_strata = strata;
    ext_strata.push_back(s);
    const double expected = aei(count_links(extended, ext_group, ext_strata));
    const double got =
        aei_with_added_node(count_links(g, group, strata), x, s, within, cp, out);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("marginal formula and mean degrees") {
  Graph g = Graph::from_edges(7, {{0, 1}, {0, 2}, {2, 3}, {4, 5}, {5, 6}, {3, 6}});
  std::vector<Group> group{Group::A, Group::A, Group::A, Group::A, Group::B, Group::B, Group::B};
  const auto C = Stratum::Core;
  const auto P = Stratum::Periphery;
  LinkCounts c = count_links(g, group, std::vector<Stratum>{C, C, P, P, C, P, P});
  // A periphery: 2 members, 1 pp edge, 1 cp edge, 1 cross edge.
  MarginalEntry m = marginal(c, Group::A, Stratum::Periphery, 5, 16);
  CHECK(m.stratum_size == 2);
  CHECK(m.mean_within == doctest::Approx(1.0));
  CHECK(m.mean_cp == doctest::Approx(0.5));
  CHECK(m.mean_out == doctest::Approx(0.5));
  // (2 / alpha) ((1 + 0.5) / 16 - 0.5 / 12) with alpha = 4/3.
  CHECK(m.formula == doctest::Approx(1.5 * (1.5 / 16 - 0.5 / 12)));
  CHECK(marginal(c, Group::A, Stratum::Periphery, 5, 16).oracle == m.oracle);

  // Whole-number mean degrees need no rounding: the oracle is exact.
  MarginalEntry core_b = marginal(c, Group::B, Stratum::Core, 5, 4);
  CHECK(core_b.oracle ==
        doctest::Approx(aei_with_added_node(c, Group::B, Stratum::Core, 0, 1, 0) - aei(c)));

  std::vector<MarginalEntry> entries{m, core_b};
  CHECK(weighted_mean_marginal(entries, Stratum::Periphery) == doctest::Approx(m.formula));
  CHECK_THROWS_AS(marginal(count_group_links(g, non_assortative_partition(7)), Group::A,
                           Stratum::Core, 1),
                  std::domain_error);
}

TEST_CASE("rewiring preserves degrees and simplicity") {
  Rng rng(61);
  const Graph g = erdos_renyi(80, 0.08, rng);
  Rng swap_rng(3);
  const Graph r = rewire_degree_preserving(g, swap_rng, 10);
  CHECK(r.num_edges() == g.num_edges());
  for (Vertex v = 0; v < g.num_nodes(); ++v) {
    CHECK(r.degree(v) == g.degree(v));
    CHECK_FALSE(r.has_edge(v, v));
  }
  std::size_t shared = 0;
  for (const Edge& e : g.edges()) shared += r.has_edge(e.u, e.v);
  CHECK(shared < g.num_edges() / 2);
  Rng again(3);
  const Graph r2 = rewire_degree_preserving(g, again, 10);
  CHECK(std::equal(r.edges().begin(), r.edges().end(), r2.edges().begin(), r2.edges().end()));
}

TEST_CASE("null adjustment of a planted split") {
  Rng rng(71);
  const auto planted = planted_partition(40, 40, 0.25, 0.01, rng);
  NullOptions options;
  options.shuffles = 6;
  options.pipeline = {3, 10};
  NullAdjusted a = null_adjusted_aei(planted.graph, options, 9, 1);
  CHECK(a.observed > 0.8);
  REQUIRE(a.explained_fraction.has_value());
  CHECK(*a.explained_fraction < 0.5);
  NullAdjusted b = null_adjusted_aei(planted.graph, options, 9, 8);
  CHECK(a.null_values == b.null_values);

  const Graph er = erdos_renyi(80, 0.05, rng);
  CHECK(pipeline_aei(er, options.pipeline, 1) == 0.0);
  CHECK_THROWS_AS(null_adjusted_aei(er, options, 1), RefusalError);
}
