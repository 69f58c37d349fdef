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

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polardec/graph.hpp"

namespace polardec {

using TimePoint = std::chrono::sys_seconds;

/// Closed UTC interval [start, end].
struct TimeWindow {
  TimePoint start;
  TimePoint end;
  bool contains(TimePoint t) const { return start <= t && t <= end; }
};

/// Parses RFC 3339 date-times ("2023-01-09T10:00:00Z", "...+02:00",
/// fractional seconds truncated). Returns nullopt on malformed input.
std::optional<TimePoint> parse_rfc3339(std::string_view text);
std::string format_rfc3339(TimePoint t);
/// "start/end" with both ends in RFC 3339.
std::optional<TimeWindow> parse_window(std::string_view text);

/// One directed endorsement: source_user retweeted target_user.
struct InteractionRecord {
  std::string source;
  std::string target;
  TimePoint timestamp;
  std::vector<std::string> topics;  // sorted, unique, non-empty
};

/// Column positions in the delimited input. A zero delimiter means
/// auto-detect (tab if the first line contains one, else comma).
struct ColumnSchema {
  std::size_t source = 0;
  std::size_t target = 1;
  std::size_t timestamp = 2;
  std::size_t topics = 3;
  char delimiter = 0;
  bool strict = false;
};

struct ParseResult {
  std::vector<InteractionRecord> records;
  std::size_t skipped = 0;
  bool header = false;
  std::vector<std::string> warnings;  // first few skipped rows, with line numbers
};

/// One record per valid row in input order. Malformed rows are skipped and
/// counted, or raise InputError in strict mode. A first row whose timestamp
/// does not parse is treated as a header.
ParseResult parse_interactions(std::istream& in, const ColumnSchema& schema = {});

/// Splits one delimited line, honoring RFC 4180 double quotes.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

struct WindowFilterResult {
  std::vector<InteractionRecord> records;
  std::size_t outside = 0;
};
WindowFilterResult filter_window(std::vector<InteractionRecord> records, const TimeWindow& window);

struct CrossTopicResult {
  std::vector<InteractionRecord> records;
  std::map<std::string, std::size_t> removed;  // "climate+economy" -> count
};

/// Keeps exactly the records tagged with a single topic.
CrossTopicResult filter_cross_topic(std::vector<InteractionRecord> records);

/// Simplified, connected, undirected per-topic graph. Node ids index into
/// `nodes`, which is sorted lexicographically.
struct TopicNetwork {
  std::string topic;
  std::vector<std::string> nodes;
  Graph graph;
  std::map<std::pair<Vertex, Vertex>, std::uint32_t> directed_counts;
  TimeWindow window;

  std::optional<Vertex> find(std::string_view user) const;
};

struct BuildOptions {
  std::size_t min_nodes = 10;
  std::optional<TimeWindow> window;  // defaults to the span of the records
};

/// Drops self-loops, collapses parallel and reciprocal edges, and keeps the
/// largest connected component (ties: the component holding the
/// lexicographically smallest user). Throws InputError("empty topic") or
/// InputError("degenerate network ...").
TopicNetwork build_topic_network(std::span<const InteractionRecord> records,
                                 std::string_view topic, const BuildOptions& options = {});

/// Canonical `<topic>.edges.csv`: one "u,v" row per edge, u < v, rows sorted.
void write_edge_list(std::ostream& out, const TopicNetwork& network);

/// Records as "source,target,timestamp,topic" CSV rows with a header.
void write_records(std::ostream& out, std::span<const InteractionRecord> records);

}  // namespace polardec
