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
#include <map>
#include <string>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/description_length.hpp"
#include "polardec/random.hpp"
#include "polardec/synthetic.hpp"
#include "polardec/types.hpp"

using namespace polardec;

namespace {

// Two cliques of `size` nodes, joined by the single edge (0, size).
Graph two_cliques(Vertex size) {
  std::vector<Edge> edges;
  for (Vertex base : {Vertex{0}, size}) {
    for (Vertex u = 0; u < size; ++u) {
      for (Vertex v = u + 1; v < size; ++v) edges.push_back({base + u, base + v});
    }
  }
  edges.push_back({0, size});
  return Graph::from_edges(2 * size, std::move(edges));
}

double lchoose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Description length of a bitmask labelling, written out from the
// encoding's terms.
double mask_dl(const Graph& g, std::uint32_t mask) {
  const double n = static_cast<double>(g.num_nodes());
  double n1 = 0;
  for (Vertex v = 0; v < g.num_nodes(); ++v) n1 += (mask >> v) & 1u;
  const double n0 = n - n1;
  double e_in = 0;
  for (const Edge& e : g.edges()) e_in += ((mask >> e.u) & 1u) == ((mask >> e.v) & 1u);
  const double e_out = static_cast<double>(g.num_edges()) - e_in;
  const double p_in = n0 * (n0 - 1) / 2 + n1 * (n1 - 1) / 2;
  const double p_out = n0 * n1;
  return std::log(n - 1) + lchoose(n, n1) + std::log(p_in + 1) + std::log(p_out + 1) +
         lchoose(p_in, e_in) + lchoose(p_out, e_out);
}

std::vector<std::uint8_t> mask_labels(std::uint32_t mask, std::size_t n) {
  std::vector<std::uint8_t> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = (mask >> v) & 1u;
  return labels;
}

}  // namespace

TEST_CASE("two cliques: the fit reaches the exhaustive optimum") {
  const Graph g = two_cliques(10);
  // Node 0 stays in block 0; every other labelling with both blocks
  // non-empty is enumerated.
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (1u << 20); mask += 2) {
    const std::uint32_t flipped = ~mask & ((1u << 20) - 1);
    const double dl = mask_dl(g, flipped);
    if (dl < best) {
      best = dl;
      best_mask = flipped;
    }
  }
  CHECK(best_mask == 0xffc00u);  // nodes 10..19 in block 1
  CHECK(planted_partition_dl(g, mask_labels(best_mask, 20)) == doctest::Approx(best));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    BlockModelFit fit = fit_planted_partition(g, 2, seed);
    CHECK(fit.converged);
    CHECK(fit.assortative);
    CHECK(fit.description_length == doctest::Approx(best).epsilon(1e-12));
    for (Vertex v = 1; v < 20; ++v) CHECK((fit.labels[v] == fit.labels[0]) == (v < 10));
  }
}

TEST_CASE("description length of arbitrary labellings") {
  Rng rng(11);
  const Graph g = erdos_renyi(20, 0.3, rng);
  for (int i = 0; i < 50; ++i) {
    const auto mask = static_cast<std::uint32_t>(uniform_index(rng, (1u << 20) - 2) + 1);
    CHECK(planted_partition_dl(g, mask_labels(mask, 20)) ==
          doctest::Approx(mask_dl(g, mask)).epsilon(1e-12));
  }
}

TEST_CASE("one-block fit is the Erdos-Renyi encoding") {
  const Graph g = two_cliques(5);
  BlockModelFit fit = fit_planted_partition(g, 1, 9);
  CHECK(fit.labels == std::vector<std::uint8_t>(10, 0));
  CHECK(fit.description_length == doctest::Approx(er_description_length(10, 21)));
}

TEST_CASE("fit rejects unusable input") {
  CHECK_THROWS_AS(fit_planted_partition(Graph::from_edges(4, {}), 2, 1), InputError);
  CHECK_THROWS_AS(fit_planted_partition(two_cliques(3), 3, 1), std::invalid_argument);
}

TEST_CASE("fits are deterministic in the seed") {
  Rng rng(5);
  const auto planted = planted_partition(40, 40, 0.2, 0.02, rng);
  auto a = fit_planted_partition(planted.graph, 2, 77);
  auto b = fit_planted_partition(planted.graph, 2, 77);
  CHECK(a.labels == b.labels);
  CHECK(a.description_length == b.description_length);
}

TEST_CASE("model selection separates random and planted graphs") {
  Rng rng(3);
  const Graph er = erdos_renyi(200, 0.03, rng);
  const auto planted = planted_partition(60, 60, 0.15, 0.005, rng);
  auto null_sel = select_model(er, 5, 1);
  CHECK(null_sel.k_star == 1);
  CHECK_FALSE(null_sel.assortative());
  auto sel = select_model(planted.graph, 5, 1);
  CHECK(sel.k_star == 2);
  CHECK(sel.best_k2.description_length < sel.best_k1.description_length);
  auto sel_parallel = select_model(planted.graph, 5, 1, 4);
  CHECK(sel_parallel.best_k2.labels == sel.best_k2.labels);
}

TEST_CASE("consensus aligns label switching") {
  std::vector<std::vector<std::uint8_t>> runs{
      {0, 0, 0, 1, 1, 1}, {1, 1, 1, 0, 0, 0}, {0, 0, 1, 1, 1, 1}, {1, 1, 0, 1, 0, 1}};
  Partition p = consensus_from_labelings(runs);
  CHECK(p.runs == 4);
  // Run 3 agrees with run 0 on 3 of 6 nodes and aligns on node 0.
  CHECK(p.warnings.size() == 1);
  CHECK(p.prob_a == std::vector<double>{1.0, 1.0, 0.5, 0.25, 0.0, 0.25});
  CHECK(p.group_of ==
        std::vector<Group>{Group::A, Group::A, Group::A, Group::B, Group::B, Group::B});
  CHECK(p.size(Group::A) == 3);
  CHECK(p.members(Group::B) == std::vector<Vertex>{3, 4, 5});
}

TEST_CASE("consensus partition of two cliques") {
  const Graph g = two_cliques(8);
  Partition p = consensus_partition(g, 20, 4);
  CHECK(p.assortative);
  CHECK(p.runs == 20);
  for (Vertex v = 0; v < 16; ++v) {
    CHECK(p.prob_a[v] == (v < 8 ? 1.0 : 0.0));
  }
  Partition q = consensus_partition(g, 20, 4, 8);
  CHECK(q.prob_a == p.prob_a);
}

TEST_CASE("trivial partition") {
  Partition p = non_assortative_partition(3);
  CHECK_FALSE(p.assortative);
  CHECK(p.size(Group::A) == 3);
}

TEST_CASE("orientation follows the left-leaning majority") {
  Partition p = consensus_from_labelings(
      std::vector<std::vector<std::uint8_t>>{{0, 0, 0, 1, 1, 1}});
  std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  std::map<std::string, Leaning> lean{
      {"a", Leaning::Right}, {"d", Leaning::Left}, {"e", Leaning::Left}};
  CHECK(orient_groups(p, names, lean).left_group == Group::B);

  std::map<std::string, Leaning> one_sided{{"a", Leaning::Left}};
  Partition unset = orient_groups(p, names, one_sided);
  CHECK_FALSE(unset.left_group.has_value());
  CHECK_FALSE(unset.warnings.empty());

  std::map<std::string, Leaning> even{{"a", Leaning::Left}, {"d", Leaning::Left}};
  CHECK_FALSE(orient_groups(p, names, even).left_group.has_value());
}

TEST_CASE("two 20-cliques joined by one edge split along the cliques") {
  const Graph g = two_cliques(20);
  ModelSelection sel = select_model(g, 5, 12);
  CHECK(sel.k_star == 2);
  for (Vertex v = 1; v < 40; ++v) {
    CHECK((sel.best_k2.labels[v] == sel.best_k2.labels[0]) == (v < 20));
  }
}

TEST_CASE("a node tied between the blocks gets a fractional membership") {
  // Two 8-cliques; node 16 links to four members of each.
  std::vector<Edge> edges;
  for (Vertex base : {Vertex{0}, Vertex{8}}) {
    for (Vertex u = 0; u < 8; ++u) {
      for (Vertex v = u + 1; v < 8; ++v) edges.push_back({base + u, base + v});
    }
  }
  for (Vertex v : {0u, 1u, 2u, 3u, 8u, 9u, 10u, 11u}) edges.push_back({v, 16});
  const Graph g = Graph::from_edges(17, std::move(edges));
  // Either side gives the same counts, hence the same description length.
  auto left = mask_labels(0xff00u, 17);
  auto right = mask_labels(0x1ff00u, 17);
  CHECK(planted_partition_dl(g, left) == doctest::Approx(planted_partition_dl(g, right)));
  Partition p = consensus_partition(g, 40, 6);
  CHECK(p.prob_a[16] > 0.0);
  CHECK(p.prob_a[16] < 1.0);
  for (Vertex v = 0; v < 16; ++v) CHECK((p.prob_a[v] == 0.0 || p.prob_a[v] == 1.0));
}
