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
#include "polardec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

#include "polardec/io.hpp"
#include "polardec/types.hpp"

namespace polardec {
namespace {

constexpr std::size_t kMaxWarnings = 20;

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  auto r = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return r.ec == std::errc{};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_topics(std::string_view field) {
  std::set<std::string> topics;
  while (!field.empty()) {
    auto cut = field.find(';');
    auto piece = trim(field.substr(0, cut));
    if (!piece.empty()) topics.emplace(piece);
    if (cut == std::string_view::npos) break;
    field.remove_prefix(cut + 1);
  }
  return {topics.begin(), topics.end()};
}

}  // namespace

std::optional<TimePoint> parse_rfc3339(std::string_view s) {
  using namespace std::chrono;
  s = trim(s);
  int y, mo, d, h, mi, sec;
  if (!read_int(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d) ||
      (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !read_int(s, 11, 2, h) ||
      s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' || !read_int(s, 17, 2, sec)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) return std::nullopt;
  }
  int offset_minutes = 0;
  if (pos >= s.size()) return std::nullopt;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!read_int(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !read_int(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (s[pos] == '+' ? 1 : -1) * (oh * 60 + om);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
}

std::string format_rfc3339(TimePoint t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<TimeWindow> parse_window(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto start = parse_rfc3339(text.substr(0, slash));
  auto end = parse_rfc3339(text.substr(slash + 1));
  if (!start || !end || *end < *start) return std::nullopt;
  return TimeWindow{*start, *end};
}

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

ParseResult parse_interactions(std::istream& in, const ColumnSchema& schema) {
  if (!in) throw InputError("unreadable input stream");
  ParseResult result;
  char delimiter = schema.delimiter;
  const std::size_t needed =
      std::max({schema.source, schema.target, schema.timestamp, schema.topics}) + 1;

  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  auto reject = [&](const std::string& why) {
    std::string msg = "line " + std::to_string(line_no) + ": " + why;
    if (schema.strict) throw InputError(msg);
    ++result.skipped;
    if (result.warnings.size() < kMaxWarnings) result.warnings.push_back(msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (delimiter == 0) delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    auto fields = split_delimited(line, delimiter);
    const bool was_first = first_row;
    first_row = false;
    if (fields.size() < needed) {
      reject("expected at least " + std::to_string(needed) + " columns");
      continue;
    }
    auto ts = parse_rfc3339(fields[schema.timestamp]);
    if (!ts) {
      if (was_first) {
        result.header = true;
        continue;
      }
      reject("bad timestamp '" + fields[schema.timestamp] + "'");
      continue;
    }
    auto source = trim(fields[schema.source]);
    auto target = trim(fields[schema.target]);
    if (source.empty() || target.empty()) {
      reject("empty user id");
      continue;
    }
    auto topics = split_topics(fields[schema.topics]);
    if (topics.empty()) {
      reject("empty topics");
      continue;
    }
    result.records.push_back({std::string(source), std::string(target), *ts, std::move(topics)});
  }
  if (in.bad()) throw InputError("error while reading input stream");
  return result;
}

WindowFilterResult filter_window(std::vector<InteractionRecord> records, const TimeWindow& window) {
  WindowFilterResult out;
  out.records.reserve(records.size());
  for (auto& r : records) {
    if (window.contains(r.timestamp)) {
      out.records.push_back(std::move(r));
    } else {
      ++out.outside;
    }
  }
  return out;
}

CrossTopicResult filter_cross_topic(std::vector<InteractionRecord> records) {
  CrossTopicResult out;
  out.records.reserve(records.size());
  for (auto& r : records) {
    if (r.topics.size() == 1) {
      out.records.push_back(std::move(r));
      continue;
    }
    std::string key;
    for (const auto& t : r.topics) {
      if (!key.empty()) key += '+';
      key += t;
    }
    ++out.removed[key];
  }
  return out;
}

std::optional<Vertex> TopicNetwork::find(std::string_view user) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), user);
  if (it == nodes.end() || *it != user) return std::nullopt;
  return static_cast<Vertex>(it - nodes.begin());
}

TopicNetwork build_topic_network(std::span<const InteractionRecord> records, std::string_view topic,
                                 const BuildOptions& options) {
  if (records.empty()) throw InputError("empty topic: " + std::string(topic));
  for (const auto& r : records) {
    if (r.topics.size() != 1 || r.topics.front() != topic) {
      throw InputError("record from " + r.source + " is not tagged with exactly {" +
                       std::string(topic) + "}");
    }
  }

  std::vector<std::string> users;
  users.reserve(records.size() * 2);
  for (const auto& r : records) {
    users.push_back(r.source);
    users.push_back(r.target);
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  auto id_of = [&](const std::string& u) {
    return static_cast<Vertex>(std::lower_bound(users.begin(), users.end(), u) - users.begin());
  };

  std::vector<std::pair<Vertex, Vertex>> directed;
  directed.reserve(records.size());
  std::vector<Edge> edges;
  edges.reserve(records.size());
  TimePoint first = records.front().timestamp, last = first;
  for (const auto& r : records) {
    Vertex s = id_of(r.source), t = id_of(r.target);
    directed.emplace_back(s, t);
    edges.push_back({s, t});
    first = std::min(first, r.timestamp);
    last = std::max(last, r.timestamp);
  }
  Graph raw = Graph::from_edges(users.size(), std::move(edges));

  // Components are numbered by smallest member, so on equal size the lower
  // id is the one holding the lexicographically smallest user.
  auto comp = connected_components(raw);
  std::vector<std::size_t> size;
  for (auto c : comp) {
    if (c >= size.size()) size.resize(c + 1, 0);
    ++size[c];
  }
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < size.size(); ++c) {
    if (size[c] > size[best]) best = c;
  }
  if (size[best] < options.min_nodes) {
    throw InputError("degenerate network: topic " + std::string(topic) +
                     " has a largest connected component of " + std::to_string(size[best]) +
                     " nodes (minimum " + std::to_string(options.min_nodes) + ")");
  }

  TopicNetwork net;
  net.topic = std::string(topic);
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < raw.num_nodes(); ++v) {
    if (comp[v] == best) keep.push_back(v);
  }
  auto sub = induced_subgraph(raw, keep);
  net.graph = std::move(sub.graph);
  std::vector<Vertex> local(raw.num_nodes(), static_cast<Vertex>(-1));
  net.nodes.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    local[keep[i]] = static_cast<Vertex>(i);
    net.nodes.push_back(users[keep[i]]);
  }
  for (auto [s, t] : directed) {
    if (s == t || comp[s] != best) continue;
    ++net.directed_counts[{local[s], local[t]}];
  }
  net.window = options.window.value_or(TimeWindow{first, last});
  return net;
}

void write_edge_list(std::ostream& out, const TopicNetwork& network) {
  for (const auto& e : network.graph.edges()) {
    write_csv_row(out, {network.nodes[e.u], network.nodes[e.v]});
  }
}

void write_records(std::ostream& out, std::span<const InteractionRecord> records) {
  write_csv_row(out, {"source", "target", "timestamp", "topics"});
  for (const auto& r : records) {
    std::string topics;
    for (const auto& t : r.topics) {
      if (!topics.empty()) topics += ';';
      topics += t;
    }
    write_csv_row(out, {r.source, r.target, format_rfc3339(r.timestamp), topics});
  }
}

}  // namespace polardec
