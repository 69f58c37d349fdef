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
#include "polardec/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "polardec/parallel.hpp"

namespace polardec {
namespace {

constexpr std::uint64_t kMarginalStream = 0x6d617267ULL;
constexpr std::uint64_t kNullStream = 0x6e756c6cULL;

double pairs(std::uint64_t n) { return static_cast<double>(pair_count(n)); }

std::uint64_t& bucket(GroupCounts& g, Stratum a, Stratum b) {
  if (a != b) return g.core_periphery;
  return a == Stratum::Core ? g.core_core : g.periphery_periphery;
}

}  // namespace

LinkCounts count_links(const Graph& graph, std::span<const Group> groups,
                       std::span<const Stratum> strata) {
  if (groups.size() != graph.num_nodes() || strata.size() != graph.num_nodes()) {
    throw std::logic_error("every node needs a group and a hierarchy label");
  }
  LinkCounts c;
  for (Vertex v = 0; v < graph.num_nodes(); ++v) {
    auto& g = c[groups[v]];
    ++g.size;
    g.core_size += strata[v] == Stratum::Core;
  }
  for (const auto& e : graph.edges()) {
    const Group gu = groups[e.u], gv = groups[e.v];
    if (gu != gv) {
      ++c.between;
      ++c[gu].cross[index(strata[e.u])];
      ++c[gv].cross[index(strata[e.v])];
    } else {
      ++bucket(c[gu], strata[e.u], strata[e.v]);
    }
  }
  return c;
}

LinkCounts count_links(const Graph& graph, const Partition& partition,
                       const HierarchyLabels& hierarchy) {
  return count_links(graph, partition.group_of, hierarchy.stratum);
}

LinkCounts count_group_links(const Graph& graph, const Partition& partition) {
  std::vector<Stratum> strata(graph.num_nodes(), Stratum::Periphery);
  auto c = count_links(graph, partition.group_of, strata);
  c.hierarchical = false;
  return c;
}

double internal_density(const GroupCounts& g) {
  return static_cast<double>(g.internal()) / pairs(g.size);
}

double external_density(const LinkCounts& c) {
  return static_cast<double>(c.between) /
         (static_cast<double>(c[Group::A].size) * static_cast<double>(c[Group::B].size));
}

double aei_denominator(const LinkCounts& c) {
  return internal_density(c[Group::A]) + internal_density(c[Group::B]) + 2 * external_density(c);
}

double aei(const LinkCounts& c) {
  if (c[Group::A].size < 2 || c[Group::B].size < 2) {
    throw std::domain_error("AEI needs at least two nodes per group");
  }
  const double internal = internal_density(c[Group::A]) + internal_density(c[Group::B]);
  const double external = 2 * external_density(c);
  if (internal + external == 0.0) throw std::domain_error("AEI undefined for a graph without edges");
  return (internal - external) / (internal + external);
}

DecompositionResult decompose(const LinkCounts& c) {
  DecompositionResult d;
  d.aei = aei(c);
  d.alpha = aei_denominator(c);
  d.hierarchical = c.hierarchical;
  for (Group x : {Group::A, Group::B}) {
    const auto& g = c[x];
    const double norm = pairs(g.size) * d.alpha;
    auto& comp = d.components[index(x)];
    comp[0] = static_cast<double>(g.core_core) / norm;
    comp[1] = static_cast<double>(g.core_periphery) / norm;
    comp[2] = static_cast<double>(g.periphery_periphery) / norm;
    d.group_share[index(x)] = comp[0] + comp[1] + comp[2];
    d.sizes[index(x)] = g.size;
    d.core_sizes[index(x)] = g.core_size;
  }
  d.bridge = 2 * external_density(c) / d.alpha;
  return d;
}

double marginal_formula(const LinkCounts& c, Group group, double within, double cp, double out) {
  const double n_x = static_cast<double>(c[group].size);
  const double n_a = static_cast<double>(c[Group::A].size);
  const double n_b = static_cast<double>(c[Group::B].size);
  return 2.0 / aei_denominator(c) * ((within + cp) / (n_x * n_x) - out / (n_a * n_b));
}

double aei_with_added_node(const LinkCounts& counts, Group group, Stratum stratum,
                           std::uint64_t within, std::uint64_t cp, std::uint64_t out) {
  LinkCounts c = counts;
  auto& g = c[group];
  ++g.size;
  if (stratum == Stratum::Core) {
    ++g.core_size;
    g.core_core += within;
  } else {
    g.periphery_periphery += within;
  }
  g.core_periphery += cp;
  g.cross[index(stratum)] += out;
  c.between += out;
  return aei(c);
}

MarginalEntry marginal(const LinkCounts& c, Group group, Stratum stratum, std::uint64_t seed,
                       std::size_t draws) {
  const auto& g = c[group];
  const std::uint64_t members = g.stratum_size(stratum);
  if (members == 0) {
    throw std::domain_error(std::string("marginal undefined: empty ") +
                            std::string(to_string(stratum)) + " in group " +
                            std::string(to_string(group)));
  }
  if (draws == 0) throw std::invalid_argument("draws must be at least 1");
  MarginalEntry m;
  m.group = group;
  m.stratum = stratum;
  m.stratum_size = members;
  const double size = static_cast<double>(members);
  m.mean_within = 2.0 * static_cast<double>(g.within(stratum)) / size;
  m.mean_cp = static_cast<double>(g.core_periphery) / size;
  m.mean_out = static_cast<double>(g.cross[index(stratum)]) / size;
  m.formula = marginal_formula(c, group, m.mean_within, m.mean_cp, m.mean_out);

  const double base = aei(c);
  Rng rng = make_rng(seed, {kMarginalStream, index(group), index(stratum)});
  auto round = [&](double x) {
    const double lo = std::floor(x);
    return static_cast<std::uint64_t>(lo) + (uniform01(rng) < x - lo ? 1u : 0u);
  };
  double total = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto within = round(m.mean_within);
    const auto cp = round(m.mean_cp);
    const auto out = round(m.mean_out);
    total += aei_with_added_node(c, group, stratum, within, cp, out) - base;
  }
  m.oracle = total / static_cast<double>(draws);
  return m;
}

double weighted_mean_marginal(std::span<const MarginalEntry> entries, Stratum stratum,
                              bool use_oracle) {
  double weighted = 0.0, weight = 0.0;
  for (const auto& e : entries) {
    if (e.stratum != stratum) continue;
    const double w = static_cast<double>(e.stratum_size);
    weighted += w * (use_oracle ? e.oracle : e.formula);
    weight += w;
  }
  if (weight == 0.0) throw std::domain_error("no marginal entries for stratum");
  return weighted / weight;
}

Graph rewire_degree_preserving(const Graph& graph, Rng& rng, std::size_t swaps_per_edge) {
  std::vector<Edge> edges(graph.edges().begin(), graph.edges().end());
  if (edges.size() < 2) return graph;
  auto key = [](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const auto& e : edges) present.insert(key(e.u, e.v));
  const std::size_t attempts = swaps_per_edge * edges.size();
  for (std::size_t t = 0; t < attempts; ++t) {
    const auto i = uniform_index(rng, edges.size());
    const auto j = uniform_index(rng, edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng() & 1) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    if (present.count(key(a, d)) || present.count(key(c, b))) continue;
    present.erase(key(a, b));
    present.erase(key(c, d));
    present.insert(key(a, d));
    present.insert(key(c, b));
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
  }
  return Graph::from_edges(graph.num_nodes(), std::move(edges));
}

double pipeline_aei(const Graph& graph, const PipelineOptions& options, std::uint64_t seed,
                    unsigned jobs) {
  auto selection = select_model(graph, options.runs_per_k, seed, jobs);
  if (!selection.assortative()) return 0.0;
  Partition partition;
  try {
    partition = consensus_partition(graph, options.consensus_runs, seed, jobs);
  } catch (const RefusalError&) {
    return 0.0;
  }
  auto counts = count_group_links(graph, partition);
  if (counts[Group::A].size < 2 || counts[Group::B].size < 2) return 0.0;
  return aei(counts);
}

NullAdjusted null_adjusted_aei(const Graph& graph, double observed_aei, const NullOptions& options,
                               std::uint64_t seed, unsigned jobs) {
  if (options.shuffles == 0) throw std::invalid_argument("shuffles must be at least 1");
  NullAdjusted out;
  out.observed = observed_aei;
  out.null_values.resize(options.shuffles);
  std::vector<char> assortative(options.shuffles, 0);
  parallel_for(options.shuffles, jobs, [&](std::size_t s) {
    Rng rng = make_rng(seed, {kNullStream, s});
    Graph null_graph = rewire_degree_preserving(graph, rng, options.swaps_per_edge);
    const double value =
        pipeline_aei(null_graph, options.pipeline, derive_seed(seed, {kNullStream, s, 1}), 1);
    out.null_values[s] = value;
    assortative[s] = value != 0.0;
  });
  double sum = 0.0;
  for (double v : out.null_values) sum += v;
  out.null_mean = sum / static_cast<double>(options.shuffles);
  out.null_assortative = static_cast<std::size_t>(std::count(assortative.begin(), assortative.end(), 1));
  if (observed_aei > 0.0) {
    out.explained_fraction = std::clamp(out.null_mean / observed_aei, 0.0, 1.0);
  }
  return out;
}

NullAdjusted null_adjusted_aei(const Graph& graph, const NullOptions& options, std::uint64_t seed,
                               unsigned jobs) {
  auto selection = select_model(graph, options.pipeline.runs_per_k, seed, jobs);
  if (!selection.assortative()) {
    throw RefusalError("null adjustment not applicable: network selects a single block");
  }
  const double observed = pipeline_aei(graph, options.pipeline, seed, jobs);
  return null_adjusted_aei(graph, observed, options, seed, jobs);
}

}  // namespace polardec
