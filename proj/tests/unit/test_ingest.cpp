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

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "polardec/ingest.hpp"
#include "polardec/types.hpp"

using namespace polardec;
using namespace std::chrono;

namespace {

TimePoint at(int y, unsigned m, unsigned d, int h = 0) {
  return sys_days{year{y} / month{m} / day{d}} + hours{h};
}

InteractionRecord record(std::string s, std::string t, TimePoint ts,
                         std::vector<std::string> topics = {"x"}) {
  return {std::move(s), std::move(t), ts, std::move(topics)};
}

}  // namespace

TEST_CASE("RFC 3339 timestamps") {
  CHECK(parse_rfc3339("2023-01-09T10:00:00Z") == at(2023, 1, 9, 10));
  CHECK(parse_rfc3339("2023-01-09T12:00:00+02:00") == at(2023, 1, 9, 10));
  CHECK(parse_rfc3339("2023-01-09T05:30:00-04:30") == at(2023, 1, 9, 10));
  CHECK(parse_rfc3339("2023-01-09T10:00:00.75Z") == at(2023, 1, 9, 10));
  CHECK(parse_rfc3339(" 2023-01-09t10:00:00z ") == at(2023, 1, 9, 10));
  CHECK_FALSE(parse_rfc3339("2023-02-30T00:00:00Z"));
  CHECK_FALSE(parse_rfc3339("2023-01-09T10:00:00"));
  CHECK_FALSE(parse_rfc3339("2023-01-09T25:00:00Z"));
  CHECK_FALSE(parse_rfc3339("2023-01-09T10:00:00.Z"));
  CHECK_FALSE(parse_rfc3339("timestamp"));
  CHECK(format_rfc3339(at(2019, 3, 4, 5) + seconds{7}) == "2019-03-04T05:00:07Z");
}

TEST_CASE("windows") {
  auto w = parse_window("2019-01-01T00:00:00Z/2019-01-31T23:59:59Z");
  REQUIRE(w);
  CHECK(w->contains(at(2019, 1, 1)));
  CHECK(w->contains(at(2019, 1, 31, 23) + minutes{59} + seconds{59}));
  CHECK_FALSE(w->contains(at(2019, 2, 1)));
  CHECK_FALSE(parse_window("2019-02-01T00:00:00Z/2019-01-01T00:00:00Z"));
  CHECK_FALSE(parse_window("2019-02-01T00:00:00Z"));
}

TEST_CASE("delimited fields honor quotes") {
  CHECK(split_delimited("a,b,c", ',') == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_delimited("\"a,b\",\"say \"\"hi\"\"\",", ',') ==
        std::vector<std::string>{"a,b", "say \"hi\"", ""});
  CHECK(split_delimited("a\tb", '\t') == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parsing skips malformed rows and detects the header") {
  std::istringstream in(
      "source,target,timestamp,topics\n"
      "alice,bob,2023-01-09T10:00:00Z,economy;climate;economy\n"
      "carol,dave,not-a-time,climate\n"
      "erin,frank,2023-01-10T10:00:00Z\n"
      "gus,hal,2023-01-11T10:00:00Z,\n"
      "ivy,jon,2023-01-12T10:00:00Z,climate\n");
  ParseResult r = parse_interactions(in);
  CHECK(r.header);
  CHECK(r.skipped == 3);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].topics == std::vector<std::string>{"climate", "economy"});
  CHECK(r.records[1].source == "ivy");
  CHECK_FALSE(r.warnings.empty());

  std::istringstream strict_in("a,b,2023-01-09T10:00:00Z,x\nc,d,bad,x\n");
  ColumnSchema strict;
  strict.strict = true;
  CHECK_THROWS_AS(parse_interactions(strict_in, strict), InputError);
}

TEST_CASE("tab delimiter is detected") {
  std::istringstream in("a\tb\t2023-01-09T10:00:00Z\tx\n");
  ParseResult r = parse_interactions(in);
  CHECK_FALSE(r.header);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].target == "b");
}

TEST_CASE("custom column positions") {
  std::istringstream in("2023-01-09T10:00:00Z;x;b;a\n");
  ColumnSchema schema{3, 2, 0, 1, ';', false};
  ParseResult r = parse_interactions(in, schema);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].source == "a");
  CHECK(r.records[0].topics == std::vector<std::string>{"x"});
}

TEST_CASE("window and cross-topic filters") {
  std::vector<InteractionRecord> rs{
      record("a", "b", at(2023, 1, 1)), record("a", "c", at(2023, 2, 1)),
      record("b", "c", at(2023, 1, 5), {"x", "y"}), record("c", "d", at(2023, 1, 6), {"y"})};
  auto w = filter_window(rs, {at(2023, 1, 1), at(2023, 1, 31)});
  CHECK(w.outside == 1);
  CHECK(w.records.size() == 3);
  auto c = filter_cross_topic(w.records);
  CHECK(c.records.size() == 2);
  CHECK(c.removed.at("x+y") == 1);
}

TEST_CASE("topic networks are simplified and keep the largest component") {
  const TimePoint t = at(2023, 1, 9);
  std::vector<InteractionRecord> rs{
      record("b", "a", t), record("a", "b", t), record("a", "b", t), record("c", "c", t),
      record("b", "c", t), record("d", "e", t), record("c", "a", t + hours{5})};
  BuildOptions options;
  options.min_nodes = 3;
  TopicNetwork net = build_topic_network(rs, "x", options);
  CHECK(net.nodes == std::vector<std::string>{"a", "b", "c"});
  CHECK(net.graph.num_edges() == 3);
  CHECK(net.directed_counts.at({0, 1}) == 2);
  CHECK(net.directed_counts.at({1, 0}) == 1);
  CHECK(net.directed_counts.count({2, 2}) == 0);
  CHECK(net.window.start == t);
  CHECK(net.window.end == t + hours{5});
  CHECK(net.find("c") == Vertex{2});
  CHECK_FALSE(net.find("d"));

  std::ostringstream edges;
  write_edge_list(edges, net);
  CHECK(edges.str() == "a,b\r\na,c\r\nb,c\r\n");
}

TEST_CASE("equal components keep the lexicographically smallest user") {
  const TimePoint t = at(2023, 1, 9);
  std::vector<InteractionRecord> rs{record("y", "z", t), record("m", "n", t)};
  BuildOptions options;
  options.min_nodes = 2;
  CHECK(build_topic_network(rs, "x", options).nodes == std::vector<std::string>{"m", "n"});
}

TEST_CASE("unusable topics raise input errors") {
  BuildOptions options;
  CHECK_THROWS_WITH_AS(build_topic_network({}, "x", options), doctest::Contains("empty topic"),
                       InputError);
  std::vector<InteractionRecord> small{record("a", "b", at(2023, 1, 9))};
  CHECK_THROWS_WITH_AS(build_topic_network(small, "x", options),
                       doctest::Contains("degenerate network"), InputError);
  std::vector<InteractionRecord> wrong{record("a", "b", at(2023, 1, 9), {"y"})};
  CHECK_THROWS_AS(build_topic_network(wrong, "x", options), InputError);
}

TEST_CASE("records round-trip through the CSV writer") {
  std::vector<InteractionRecord> rs{record("a,1", "b", at(2023, 1, 9), {"x", "y"})};
  std::ostringstream out;
  write_records(out, rs);
  CHECK(out.str() ==
        "source,target,timestamp,topics\r\n\"a,1\",b,2023-01-09T00:00:00Z,x;y\r\n");
  std::istringstream in(out.str());
  ParseResult r = parse_interactions(in);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].source == "a,1");
  CHECK(r.records[0].topics == rs[0].topics);
}
