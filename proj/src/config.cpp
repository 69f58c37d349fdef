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
#include "polardec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "polardec/random.hpp"
#include "polardec/types.hpp"

namespace polardec {
namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw InputError("config: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InputError("config: " + key + " expects true/false, got '" + value + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

const SnapshotConfig& RunConfig::snapshot(const std::string& id) const {
  for (const auto& s : snapshots) {
    if (s.id == id) return s;
  }
  throw InputError("unknown snapshot: " + id);
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig c;
  std::map<std::string, SnapshotConfig> snapshots;
  std::vector<std::string> snapshot_order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "output_dir") {
      c.output_dir = resolve(base_dir, value);
    } else if (key == "seed") {
      c.seed = parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "runs") {
      c.runs = parse_unsigned<std::size_t>(key, value);
    } else if (key == "runs_per_k") {
      c.runs_per_k = parse_unsigned<std::size_t>(key, value);
    } else if (key == "bootstrap_samples") {
      c.bootstrap_samples = parse_unsigned<std::size_t>(key, value);
    } else if (key == "shuffles") {
      c.shuffles = parse_unsigned<std::size_t>(key, value);
    } else if (key == "null_runs") {
      c.null_runs = parse_unsigned<std::size_t>(key, value);
    } else if (key == "null_runs_per_k") {
      c.null_runs_per_k = parse_unsigned<std::size_t>(key, value);
    } else if (key == "swaps_per_edge") {
      c.swaps_per_edge = parse_unsigned<std::size_t>(key, value);
    } else if (key == "marginal_draws") {
      c.marginal_draws = parse_unsigned<std::size_t>(key, value);
    } else if (key == "min_nodes") {
      c.min_nodes = parse_unsigned<std::size_t>(key, value);
    } else if (key == "min_overlap") {
      c.min_overlap = parse_unsigned<std::size_t>(key, value);
    } else if (key == "smoothing_days") {
      c.smoothing_days = static_cast<int>(parse_unsigned<unsigned>(key, value));
    } else if (key == "strict") {
      c.strict = parse_bool(key, value);
    } else if (key == "adjusted_nmi") {
      c.adjusted_nmi = parse_bool(key, value);
    } else if (key == "jobs") {
      c.jobs = parse_unsigned<unsigned>(key, value);
    } else if (key == "delimiter") {
      if (value == "auto") {
        c.delimiter = 0;
      } else if (value == "comma") {
        c.delimiter = ',';
      } else if (value == "tab") {
        c.delimiter = '\t';
      } else {
        throw InputError("config: delimiter must be auto, comma or tab");
      }
    } else if (key == "topics") {
      c.topics = split_list(value);
    } else if (key == "snapshots") {
      for (const auto& id : split_list(value)) {
        if (!snapshots.count(id)) snapshot_order.push_back(id);
        snapshots[id].id = id;
      }
    } else if (key.rfind("snapshot.", 0) == 0) {
      const std::string rest = key.substr(9);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) throw InputError("config: malformed key " + key);
      const std::string id = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      if (!snapshots.count(id)) snapshot_order.push_back(id);
      auto& s = snapshots[id];
      s.id = id;
      if (field == "input" || field.rfind("input.", 0) == 0) {
        for (const auto& p : split_list(value)) s.inputs.push_back(resolve(base_dir, p));
      } else if (field == "window") {
        s.window = parse_window(value);
        if (!s.window) throw InputError("config: " + key + " expects start/end in RFC 3339");
      } else if (field == "roster") {
        s.roster = resolve(base_dir, value);
      } else {
        throw InputError("config: unknown key " + key);
      }
    } else {
      throw InputError("config: unknown key " + key);
    }
  }
  for (const auto& id : snapshot_order) {
    if (snapshots[id].inputs.empty()) throw InputError("config: snapshot " + id + " has no input");
    c.snapshots.push_back(snapshots[id]);
  }
  if (c.snapshots.empty()) throw InputError("config: no snapshots defined");
  if (c.runs == 0 || c.runs_per_k == 0 || c.bootstrap_samples == 0 || c.marginal_draws == 0) {
    throw InputError("config: runs, runs_per_k, bootstrap_samples and marginal_draws must be >= 1");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  return parse_config(in, path.parent_path());
}

std::string config_hash(const RunConfig& c) {
  std::ostringstream ss;
  ss << "seed=" << c.seed << "\nruns=" << c.runs << "\nruns_per_k=" << c.runs_per_k
     << "\nbootstrap_samples=" << c.bootstrap_samples << "\nshuffles=" << c.shuffles
     << "\nnull_runs=" << c.null_runs << "\nnull_runs_per_k=" << c.null_runs_per_k
     << "\nswaps_per_edge=" << c.swaps_per_edge << "\nmarginal_draws=" << c.marginal_draws
     << "\nmin_nodes=" << c.min_nodes << "\nmin_overlap=" << c.min_overlap
     << "\nsmoothing_days=" << c.smoothing_days << "\nstrict=" << c.strict
     << "\nadjusted_nmi=" << c.adjusted_nmi << "\ndelimiter=" << static_cast<int>(c.delimiter)
     << "\ntopics=";
  for (const auto& t : c.topics) ss << t << ';';
  for (const auto& s : c.snapshots) {
    ss << "\nsnapshot=" << s.id;
    for (const auto& p : s.inputs) ss << "|input=" << p.filename().string();
    if (s.window) ss << "|window=" << format_rfc3339(s.window->start) << '/' << format_rfc3339(s.window->end);
    if (s.roster) ss << "|roster=" << s.roster->filename().string();
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

}  // namespace polardec
