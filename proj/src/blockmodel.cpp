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
#include "polardec/blockmodel.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <stdexcept>
#include <tuple>

#include "polardec/description_length.hpp"
#include "polardec/parallel.hpp"
#include "polardec/random.hpp"

namespace polardec {
namespace {

constexpr double kImprovement = 1e-10;
constexpr std::uint64_t kSelectStream = 0x73656c656374ULL;
constexpr std::uint64_t kConsensusStream = 0x636f6e73656eULL;

// Code length of the edge placement given the in/out pair and edge totals.
double placement_dl(std::uint64_t pairs_in, std::uint64_t edges_in, std::uint64_t pairs_out,
                    std::uint64_t edges_out) {
  const double pi = static_cast<double>(pairs_in);
  const double po = static_cast<double>(pairs_out);
  return std::log(pi + 1) + std::log(po + 1) + log_binomial(pi, static_cast<double>(edges_in)) +
         log_binomial(po, static_cast<double>(edges_out));
}

// Agglomerative start: every node begins in its own block and blocks merge
// level by level under the many-block planted-partition description
// length. Per level each block proposes its best partner; proposals are
// applied cheapest first, each block merging at most once, until two
// blocks remain. Ties are broken by per-block random priorities.
std::vector<std::uint8_t> agglomerate(const Graph& g, Rng& rng) {
  const std::size_t n = g.num_nodes();
  // Isolated nodes carry no edge information; refinement places them.
  std::size_t active = 0;
  for (Vertex v = 0; v < n; ++v) active += g.degree(v) > 0;
  const std::uint64_t total_pairs = pair_count(active);
  const std::uint64_t total_edges = g.num_edges();
  std::vector<Vertex> block_of(n);
  std::iota(block_of.begin(), block_of.end(), Vertex{0});
  std::vector<std::uint64_t> size(n, 1);
  std::vector<std::uint64_t> priority(n);
  for (auto& p : priority) p = rng();
  std::size_t blocks = active;
  std::uint64_t pairs_in = 0;
  std::uint64_t edges_in = 0;

  struct Proposal {
    double delta;
    std::uint64_t tiebreak;
    Vertex r;
    Vertex s;
  };
  std::unordered_map<std::uint64_t, std::uint64_t> between;
  while (blocks > 2) {
    between.clear();
    for (const auto& e : g.edges()) {
      Vertex r = block_of[e.u], s = block_of[e.v];
      if (r == s) continue;
      if (r > s) std::swap(r, s);
      ++between[(static_cast<std::uint64_t>(r) << 32) | s];
    }
    const double base = placement_dl(pairs_in, edges_in, total_pairs - pairs_in,
                                     total_edges - edges_in);
    auto delta = [&](Vertex r, Vertex s, std::uint64_t e_rs) {
      const std::uint64_t x = size[r] * size[s];
      return placement_dl(pairs_in + x, edges_in + e_rs, total_pairs - pairs_in - x,
                          total_edges - edges_in - e_rs) -
             base - log_binomial(static_cast<double>(size[r] + size[s]),
                                 static_cast<double>(size[r]));
    };
    // Best partner per block.
    std::unordered_map<Vertex, Proposal> best;
    auto offer = [&](Vertex from, Vertex to, double d) {
      const std::uint64_t tb = priority[from] ^ splitmix64(priority[to]);
      auto it = best.find(from);
      if (it == best.end() || d < it->second.delta ||
          (d == it->second.delta && tb < it->second.tiebreak)) {
        best[from] = {d, tb, std::min(from, to), std::max(from, to)};
      }
    };
    for (const auto& [key, e_rs] : between) {
      const Vertex r = static_cast<Vertex>(key >> 32);
      const Vertex s = static_cast<Vertex>(key & 0xffffffffu);
      const double d = delta(r, s, e_rs);
      offer(r, s, d);
      offer(s, r, d);
    }
    std::vector<Proposal> proposals;
    proposals.reserve(best.size());
    for (const auto& [_, p] : best) proposals.push_back(p);
    if (proposals.empty()) {
      // Disconnected blocks: join the two smallest.
      std::vector<Vertex> live;
      for (Vertex v = 0; v < n; ++v) {
        if (block_of[v] == v && size[v] > 0 && g.degree(v) > 0) live.push_back(v);
      }
      std::sort(live.begin(), live.end(), [&](Vertex a, Vertex b) {
        return std::tie(size[a], priority[a]) < std::tie(size[b], priority[b]);
      });
      proposals.push_back({0.0, 0, std::min(live[0], live[1]), std::max(live[0], live[1])});
    }
    std::sort(proposals.begin(), proposals.end(), [](const Proposal& a, const Proposal& b) {
      return std::tie(a.delta, a.tiebreak, a.r, a.s) < std::tie(b.delta, b.tiebreak, b.r, b.s);
    });
    const std::size_t limit = std::max<std::size_t>(1, (blocks - 2) / 2);
    std::vector<Vertex> target(n);
    std::iota(target.begin(), target.end(), Vertex{0});
    std::vector<char> used(n, 0);
    std::size_t merges = 0;
    for (const auto& p : proposals) {
      if (merges == limit) break;
      if (used[p.r] || used[p.s]) continue;
      used[p.r] = used[p.s] = 1;
      target[p.s] = p.r;
      const auto key = (static_cast<std::uint64_t>(p.r) << 32) | p.s;
      auto it = between.find(key);
      edges_in += it == between.end() ? 0 : it->second;
      pairs_in += size[p.r] * size[p.s];
      size[p.r] += size[p.s];
      size[p.s] = 0;
      ++merges;
    }
    for (auto& b : block_of) b = target[b];
    blocks -= merges;
  }
  std::vector<std::uint8_t> labels(n, 0);
  std::optional<Vertex> first;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) == 0) continue;
    if (!first) first = block_of[v];
    labels[v] = block_of[v] == *first ? 0 : 1;
  }
  return labels;
}

PlantedCounts tally(const Graph& g, std::span<const std::uint8_t> labels) {
  PlantedCounts c;
  for (auto l : labels) (l == 0 ? c.n0 : c.n1)++;
  for (const auto& e : g.edges()) (labels[e.u] == labels[e.v] ? c.e_in : c.e_out)++;
  return c;
}

void refine(const Graph& g, std::vector<std::uint8_t>& labels, Rng& rng, std::size_t move_cap,
            bool& converged, double& dl) {
  PlantedCounts c = tally(g, labels);
  dl = planted_partition_dl(c);
  std::vector<Vertex> order(g.num_nodes());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::size_t moves = 0;
  converged = true;
  for (bool moved = true; moved;) {
    moved = false;
    shuffle(order.begin(), order.end(), rng);
    for (Vertex v : order) {
      const std::uint8_t from = labels[v];
      const std::uint64_t from_size = from == 0 ? c.n0 : c.n1;
      if (from_size == 1) continue;
      std::uint64_t same = 0, cross = 0;
      for (Vertex w : g.neighbors(v)) (labels[w] == from ? same : cross)++;
      PlantedCounts next = c;
      next.e_in = c.e_in - same + cross;
      next.e_out = c.e_out + same - cross;
      if (from == 0) {
        --next.n0;
        ++next.n1;
      } else {
        --next.n1;
        ++next.n0;
      }
      const double next_dl = planted_partition_dl(next);
      if (next_dl < dl - kImprovement && (assortative(next) || !assortative(c))) {
        labels[v] = 1 - from;
        c = next;
        dl = next_dl;
        moved = true;
        if (++moves >= move_cap) {
          converged = false;
          return;
        }
      }
    }
  }
}

}  // namespace

double planted_partition_dl(const Graph& graph, std::span<const std::uint8_t> labels) {
  return planted_partition_dl(tally(graph, labels));
}

BlockModelFit fit_planted_partition(const Graph& graph, int k, std::uint64_t seed,
                                    const FitOptions& options) {
  if (k != 1 && k != 2) throw std::invalid_argument("block count must be 1 or 2");
  if (graph.num_edges() == 0) throw InputError("cannot fit a block model to a graph without edges");
  BlockModelFit fit;
  fit.k = k;
  fit.seed = seed;
  if (k == 1) {
    fit.labels.assign(graph.num_nodes(), 0);
    fit.description_length = er_description_length(graph.num_nodes(), graph.num_edges());
    return fit;
  }
  if (graph.num_nodes() < 2) throw InputError("two blocks need at least two nodes");
  Rng rng(seed);
  fit.labels = agglomerate(graph, rng);
  refine(graph, fit.labels, rng, options.moves_per_node * graph.num_nodes(), fit.converged,
         fit.description_length);
  fit.assortative = assortative(tally(graph, fit.labels));
  return fit;
}

ModelSelection select_model(const Graph& graph, std::size_t runs_per_k, std::uint64_t seed,
                            unsigned jobs) {
  if (runs_per_k == 0) throw std::invalid_argument("runs_per_k must be at least 1");
  ModelSelection sel;
  // The one-block fit has no free labels; every run would be identical.
  sel.best_k1 = fit_planted_partition(graph, 1, derive_seed(seed, {kSelectStream, 1, 0}));
  std::vector<BlockModelFit> fits(runs_per_k);
  parallel_for(runs_per_k, jobs, [&](std::size_t r) {
    fits[r] = fit_planted_partition(graph, 2, derive_seed(seed, {kSelectStream, 2, r}));
  });
  // Prefer assortative fits; a disassortative best fit is kept for the
  // record but cannot select k = 2.
  std::size_t best = 0;
  for (std::size_t r = 1; r < fits.size(); ++r) {
    const auto& cur = fits[best];
    const auto& cand = fits[r];
    if (cand.assortative != cur.assortative ? cand.assortative
                                            : cand.description_length < cur.description_length) {
      best = r;
    }
  }
  sel.best_k2 = std::move(fits[best]);
  sel.k_star = sel.best_k2.assortative &&
                       sel.best_k2.description_length < sel.best_k1.description_length
                   ? 2
                   : 1;
  return sel;
}

std::size_t Partition::size(Group g) const {
  return static_cast<std::size_t>(std::count(group_of.begin(), group_of.end(), g));
}

std::vector<Vertex> Partition::members(Group g) const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < group_of.size(); ++v) {
    if (group_of[v] == g) out.push_back(v);
  }
  return out;
}

std::uint64_t consensus_run_seed(std::uint64_t seed, std::size_t run) {
  return derive_seed(seed, {kConsensusStream, run});
}

Partition consensus_from_labelings(std::span<const std::vector<std::uint8_t>> labelings) {
  if (labelings.empty()) throw std::invalid_argument("consensus needs at least one run");
  const auto& ref = labelings.front();
  const std::size_t n = ref.size();
  Partition p;
  p.runs = labelings.size();
  p.assortative = true;
  if (n == 0) return p;
  const std::uint8_t a_label = ref[0];
  std::vector<std::size_t> a_votes(n, 0);
  std::size_t ties = 0;
  for (const auto& run : labelings) {
    if (run.size() != n) throw std::invalid_argument("labelings differ in length");
    std::size_t agree = 0;
    for (std::size_t v = 0; v < n; ++v) agree += run[v] == ref[v];
    bool swap;
    if (2 * agree != n) {
      swap = 2 * agree < n;
    } else {
      swap = run[0] != ref[0];
      ++ties;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const std::uint8_t label = swap ? 1 - run[v] : run[v];
      a_votes[v] += label == a_label;
    }
  }
  if (ties > 0) {
    p.warnings.push_back(std::to_string(ties) +
                         " run(s) overlapped run 0 exactly half; aligned on the smallest node");
  }
  p.group_of.resize(n);
  p.prob_a.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    p.prob_a[v] = static_cast<double>(a_votes[v]) / static_cast<double>(labelings.size());
    p.group_of[v] = 2 * a_votes[v] >= labelings.size() ? Group::A : Group::B;
  }
  return p;
}

Partition consensus_partition(const Graph& graph, std::size_t runs, std::uint64_t seed,
                              unsigned jobs) {
  if (runs == 0) throw std::invalid_argument("consensus needs at least one run");
  std::vector<BlockModelFit> fits(runs);
  parallel_for(runs, jobs, [&](std::size_t r) {
    fits[r] = fit_planted_partition(graph, 2, consensus_run_seed(seed, r));
  });
  std::vector<std::vector<std::uint8_t>> labelings;
  std::size_t capped = 0;
  for (auto& f : fits) {
    capped += !f.converged;
    if (f.assortative) labelings.push_back(std::move(f.labels));
  }
  if (labelings.empty()) {
    throw RefusalError("no consensus run found an assortative two-group split");
  }
  Partition p = consensus_from_labelings(labelings);
  if (p.size(Group::A) < 2 || p.size(Group::B) < 2) {
    throw RefusalError("consensus collapsed into a group with fewer than two nodes");
  }
  if (labelings.size() < runs) {
    p.warnings.push_back(std::to_string(runs - labelings.size()) +
                         " disassortative run(s) left out of the consensus");
  }
  if (capped > 0) {
    p.warnings.push_back(std::to_string(capped) + " fit(s) stopped at the move cap");
  }
  return p;
}

Partition non_assortative_partition(std::size_t num_nodes) {
  Partition p;
  p.group_of.assign(num_nodes, Group::A);
  p.prob_a.assign(num_nodes, 1.0);
  p.assortative = false;
  return p;
}

Partition orient_groups(Partition partition, std::span<const std::string> node_names,
                        const std::map<std::string, Leaning>& affiliations) {
  std::array<std::size_t, 2> known{0, 0};
  std::array<std::size_t, 2> left{0, 0};
  for (std::size_t v = 0; v < node_names.size(); ++v) {
    auto it = affiliations.find(node_names[v]);
    if (it == affiliations.end()) continue;
    const auto g = index(partition.group_of[v]);
    ++known[g];
    if (it->second == Leaning::Left) ++left[g];
  }
  partition.left_group.reset();
  if (known[0] == 0 || known[1] == 0) {
    partition.warnings.push_back("left/right orientation unset: a group has no known candidate");
  } else if (left[0] == left[1]) {
    partition.warnings.push_back("left/right orientation unset: left candidates split evenly");
  } else {
    partition.left_group = left[0] > left[1] ? Group::A : Group::B;
  }
  return partition;
}

}  // namespace polardec
