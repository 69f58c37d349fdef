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
#include <span>
#include <vector>

namespace polardec {

using Vertex = std::uint32_t;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u;
  Vertex v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Number of unordered node pairs, n(n-1)/2.
constexpr std::uint64_t pair_count(std::uint64_t n) {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

/// Simple undirected graph in compressed adjacency form. Immutable once
/// built; safe to share read-only between threads.
class Graph {
 public:
  Graph() = default;

  /// Builds a simple graph: self-loops are dropped, pairs are oriented
  /// u < v, and duplicates collapse.
  static Graph from_edges(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;  // sorted
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;  // sorted per node
};

struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;  // local index -> parent vertex
};

/// Graph induced on `nodes` (must be sorted, unique). Local ids follow the
/// order of `nodes`.
Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> nodes);

/// Component id per vertex; components are numbered by their smallest vertex.
std::vector<std::uint32_t> connected_components(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace polardec
