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
#include "polardec/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polardec/parallel.hpp"
#include "polardec/random.hpp"

namespace polardec {
namespace {

constexpr double kImprovement = 1e-10;
constexpr std::uint64_t kHierarchyStream = 0x686965726172ULL;

double ratio(std::uint64_t edges, std::uint64_t pairs) {
  return pairs == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(edges) / static_cast<double>(pairs);
}

bool flat(const Densities& d) {
  std::vector<double> defined;
  for (double x : {d.cc, d.cp, d.pp}) {
    if (!std::isnan(x)) defined.push_back(x);
  }
  return std::adjacent_find(defined.begin(), defined.end(), std::not_equal_to<>()) ==
         defined.end();
}

// Counts after moving a node with `to_core` core neighbours and
// `to_periphery` periphery neighbours across the split.
CorePeripheryCounts moved(CorePeripheryCounts c, bool into_core, std::uint64_t to_core,
                          std::uint64_t to_periphery) {
  if (into_core) {
    --c.n_periphery;
    ++c.n_core;
    c.e_cc += to_core;
    c.e_cp = c.e_cp + to_periphery - to_core;
    c.e_pp -= to_periphery;
  } else {
    --c.n_core;
    ++c.n_periphery;
    c.e_cc -= to_core;
    c.e_cp = c.e_cp + to_core - to_periphery;
    c.e_pp += to_periphery;
  }
  return c;
}

}  // namespace

Densities densities(const CorePeripheryCounts& c) {
  return {ratio(c.e_cc, c.pairs_cc()), ratio(c.e_cp, c.pairs_cp()), ratio(c.e_pp, c.pairs_pp())};
}

CorePeripheryCounts tally_core_periphery(const Graph& graph, std::span<const Stratum> labels) {
  CorePeripheryCounts c;
  for (auto s : labels) (s == Stratum::Core ? c.n_core : c.n_periphery)++;
  for (const auto& e : graph.edges()) {
    const bool a = labels[e.u] == Stratum::Core, b = labels[e.v] == Stratum::Core;
    (a && b ? c.e_cc : (a || b ? c.e_cp : c.e_pp))++;
  }
  return c;
}

double core_periphery_dl(const Graph& graph, std::span<const Stratum> labels) {
  return core_periphery_dl(tally_core_periphery(graph, labels));
}

std::vector<Vertex> CorePeripheryFit::core() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < labels.size(); ++v) {
    if (labels[v] == Stratum::Core) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> CorePeripheryFit::periphery() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < labels.size(); ++v) {
    if (labels[v] == Stratum::Periphery) out.push_back(v);
  }
  return out;
}

double er_description_length(const Graph& graph) {
  return er_description_length(graph.num_nodes(), graph.num_edges());
}

CorePeripheryFit fit_hub_spoke(const Graph& g, std::uint64_t seed, const FitOptions& options) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw InputError("core-periphery fit needs at least two nodes");
  Rng rng(seed);
  CorePeripheryFit fit;
  fit.seed = seed;

  std::vector<std::uint64_t> tiebreak(n);
  for (auto& t : tiebreak) t = rng();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return tiebreak[a] < tiebreak[b];
  });

  // Degree-prefix scan: core = the c highest-degree nodes.
  std::vector<char> in_core(n, 0);
  CorePeripheryCounts c;
  c.n_periphery = n;
  c.e_pp = g.num_edges();
  std::size_t best_prefix = 1;
  double best_dl = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Vertex v = order[k];
    std::uint64_t to_core = 0, to_periphery = 0;
    for (Vertex w : g.neighbors(v)) (in_core[w] ? to_core : to_periphery)++;
    c = moved(c, true, to_core, to_periphery);
    in_core[v] = 1;
    if (!hub_spoke_ordered(c)) continue;
    double dl = core_periphery_dl(c);
    if (dl < best_dl) {
      best_dl = dl;
      best_prefix = k + 1;
    }
  }

  fit.labels.assign(n, Stratum::Periphery);
  for (std::size_t k = 0; k < best_prefix; ++k) fit.labels[order[k]] = Stratum::Core;
  c = tally_core_periphery(g, fit.labels);
  double dl = core_periphery_dl(c);

  std::vector<Vertex> sweep(n);
  std::iota(sweep.begin(), sweep.end(), Vertex{0});
  const std::size_t move_cap = options.moves_per_node * n;
  std::size_t moves = 0;
  for (bool improved = true; improved && fit.converged;) {
    improved = false;
    shuffle(sweep.begin(), sweep.end(), rng);
    for (Vertex v : sweep) {
      const bool core = fit.labels[v] == Stratum::Core;
      if ((core ? c.n_core : c.n_periphery) == 1) continue;
      std::uint64_t to_core = 0, to_periphery = 0;
      for (Vertex w : g.neighbors(v)) {
        (fit.labels[w] == Stratum::Core ? to_core : to_periphery)++;
      }
      auto next = moved(c, !core, to_core, to_periphery);
      if (!hub_spoke_ordered(next)) continue;
      double next_dl = core_periphery_dl(next);
      if (next_dl < dl - kImprovement) {
        fit.labels[v] = core ? Stratum::Periphery : Stratum::Core;
        c = next;
        dl = next_dl;
        improved = true;
        if (++moves >= move_cap) {
          fit.converged = false;
          break;
        }
      }
    }
  }

  fit.counts = c;
  fit.description_length = dl;
  fit.densities = densities(c);
  fit.weak = !hub_spoke_ordered(c) || flat(fit.densities);
  return fit;
}

HierarchyTest test_hierarchy(const Graph& subgraph, std::size_t runs, std::uint64_t seed,
                             unsigned jobs) {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  std::vector<CorePeripheryFit> fits(runs);
  parallel_for(runs, jobs, [&](std::size_t r) {
    fits[r] = fit_hub_spoke(subgraph, derive_seed(seed, {kHierarchyStream, r}));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs; ++r) {
    if (fits[r].description_length < fits[best].description_length) best = r;
  }
  HierarchyTest t;
  t.er_dl = er_description_length(subgraph);
  t.best = std::move(fits[best]);
  t.significant = t.best.description_length < t.er_dl;
  return t;
}

StratumConsensus consensus_strata(std::span<const std::vector<Stratum>> runs) {
  if (runs.empty()) throw std::invalid_argument("consensus needs at least one run");
  const auto& ref = runs.front();
  const std::size_t n = ref.size();
  std::vector<std::size_t> core_votes(n, 0);
  for (const auto& run : runs) {
    if (run.size() != n) throw std::invalid_argument("runs differ in length");
    std::size_t agree = 0;
    for (std::size_t v = 0; v < n; ++v) agree += run[v] == ref[v];
    const bool flip = 2 * agree < n;
    for (std::size_t v = 0; v < n; ++v) {
      core_votes[v] += (run[v] == Stratum::Core) != flip;
    }
  }
  StratumConsensus out;
  out.labels.resize(n);
  out.prob_core.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.prob_core[v] = static_cast<double>(core_votes[v]) / static_cast<double>(runs.size());
    out.labels[v] = 2 * core_votes[v] > runs.size() ? Stratum::Core : Stratum::Periphery;
  }
  return out;
}

HierarchyLabels consensus_hierarchy(const Partition& partition, const Graph& graph,
                                    std::size_t runs, std::uint64_t seed, unsigned jobs) {
  if (!partition.assortative) {
    throw RefusalError("hierarchy inference refused: network has no assortative two-group split");
  }
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (partition.group_of.size() != graph.num_nodes()) {
    throw std::invalid_argument("partition does not cover the graph");
  }
  HierarchyLabels h;
  h.runs = runs;
  h.stratum.assign(graph.num_nodes(), Stratum::Periphery);
  h.prob_core.assign(graph.num_nodes(), 0.0);

  for (Group group : {Group::A, Group::B}) {
    auto& info = h.groups[index(group)];
    auto members = partition.members(group);
    info.size = members.size();
    auto sub = induced_subgraph(graph, members);
    info.dl_er = er_description_length(sub.graph);
    if (members.size() < 2) {
      info.weak = true;
      info.warnings.push_back("group has fewer than two nodes; no hierarchy to fit");
      info.densities = densities(tally_core_periphery(
          sub.graph, std::vector<Stratum>(members.size(), Stratum::Periphery)));
      continue;
    }
    std::vector<CorePeripheryFit> fits(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
      fits[r] = fit_hub_spoke(sub.graph, derive_seed(seed, {kHierarchyStream, index(group), r}));
    });
    std::vector<std::vector<Stratum>> labelings;
    labelings.reserve(runs);
    const CorePeripheryFit* best = &fits.front();
    std::size_t weak = 0, capped = 0;
    for (const auto& f : fits) {
      labelings.push_back(f.labels);
      if (f.description_length < best->description_length) best = &f;
      weak += f.weak;
      capped += !f.converged;
    }
    info.dl_core_periphery = best->description_length;
    info.significant = info.dl_core_periphery < info.dl_er;
    info.weak = best->weak;
    if (weak > 0) info.warnings.push_back(std::to_string(weak) + " run(s) found a weak hierarchy");
    if (capped > 0) info.warnings.push_back(std::to_string(capped) + " run(s) hit the move cap");

    auto consensus = consensus_strata(labelings);
    for (std::size_t i = 0; i < members.size(); ++i) {
      h.stratum[members[i]] = consensus.labels[i];
      h.prob_core[members[i]] = consensus.prob_core[i];
    }
    auto counts = tally_core_periphery(sub.graph, consensus.labels);
    info.core_size = counts.n_core;
    info.densities = densities(counts);
  }
  return h;
}

}  // namespace polardec
