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
#include "polardec/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "polardec/ingest.hpp"
#include "polardec/polarization.hpp"

namespace polardec {
namespace fs = std::filesystem;

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (uniform01(rng) < p) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

PlantedPartition planted_partition(std::size_t n_a, std::size_t n_b, double p_in, double p_out,
                                   Rng& rng) {
  PlantedPartition out;
  const std::size_t n = n_a + n_b;
  out.block.assign(n, 0);
  std::fill(out.block.begin() + static_cast<std::ptrdiff_t>(n_a), out.block.end(), 1);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (uniform01(rng) < (out.block[u] == out.block[v] ? p_in : p_out)) edges.push_back({u, v});
    }
  }
  out.graph = Graph::from_edges(n, std::move(edges));
  return out;
}

namespace {

double bundle(const BundleDensities& p, Stratum a, Stratum b) {
  if (a != b) return p.cp;
  return a == Stratum::Core ? p.cc : p.pp;
}

}  // namespace

PlantedCorePeriphery planted_core_periphery(std::size_t n_core, std::size_t n_periphery,
                                            const BundleDensities& p, Rng& rng) {
  PlantedCorePeriphery out;
  const std::size_t n = n_core + n_periphery;
  out.stratum.assign(n, Stratum::Periphery);
  std::fill(out.stratum.begin(), out.stratum.begin() + static_cast<std::ptrdiff_t>(n_core),
            Stratum::Core);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (uniform01(rng) < bundle(p, out.stratum[u], out.stratum[v])) edges.push_back({u, v});
    }
  }
  out.graph = Graph::from_edges(n, std::move(edges));
  return out;
}

PlantedHierarchy planted_hierarchy(std::array<std::size_t, 2> core,
                                   std::array<std::size_t, 2> periphery,
                                   const BundleDensities& within, double p_cross, Rng& rng) {
  PlantedHierarchy out;
  for (Group g : {Group::A, Group::B}) {
    out.group.insert(out.group.end(), core[index(g)] + periphery[index(g)], g);
    out.stratum.insert(out.stratum.end(), core[index(g)], Stratum::Core);
    out.stratum.insert(out.stratum.end(), periphery[index(g)], Stratum::Periphery);
  }
  const std::size_t n = out.group.size();
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const double p = out.group[u] == out.group[v]
                           ? bundle(within, out.stratum[u], out.stratum[v])
                           : p_cross;
      if (uniform01(rng) < p) edges.push_back({u, v});
    }
  }
  out.graph = Graph::from_edges(n, std::move(edges));
  return out;
}

CorpusSpec CorpusSpec::standard() {
  using namespace std::chrono;
  CorpusSpec spec;
  spec.snapshots = {{"2019", sys_days(year(2019) / January / 21), 84},
                    {"2023", sys_days(year(2023) / January / 9), 84}};
  return spec;
}

namespace {

std::string user_name(std::size_t id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%04zu", id);
  return buf;
}

struct CorpusUser {
  std::string name;
  Group group;  // stance in the first topic
  Stratum stratum;
};

TimePoint draw_time(const CorpusSpec& spec, const CorpusSnapshot& snap, Rng& rng) {
  std::int64_t day;
  if (uniform01(rng) < spec.burst_share) {
    day = snap.days - 21 + static_cast<std::int64_t>(uniform_index(rng, 5)) - 2;
  } else {
    day = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(snap.days)));
  }
  return TimePoint(snap.start) + std::chrono::days(day) +
         std::chrono::seconds(uniform_index(rng, 86400));
}

void write_rows(std::ostream& out, const std::vector<InteractionRecord>& records) {
  write_csv_row(out, {"source", "target", "timestamp", "topics"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::string topics;
    for (const auto& t : r.topics) topics += (topics.empty() ? "" : ";") + t;
    write_csv_row(out, {r.source, r.target, format_rfc3339(r.timestamp), topics});
    // A few malformed rows the parser must skip.
    if (i == 10) write_csv_row(out, {"u0001", "u0002"});
    if (i == 20) write_csv_row(out, {"u0001", "u0002", "not-a-time", "climate"});
  }
}

}  // namespace

Json write_corpus(const CorpusSpec& spec, const fs::path& dir) {
  fs::create_directories(dir);
  Rng layout_rng = make_rng(spec.seed, {0});

  std::vector<CorpusUser> users;
  for (Group g : {Group::A, Group::B}) {
    for (std::size_t i = 0; i < spec.core[index(g)]; ++i) users.push_back({"", g, Stratum::Core});
    for (std::size_t i = 0; i < spec.periphery[index(g)]; ++i) {
      users.push_back({"", g, Stratum::Periphery});
    }
  }
  std::vector<std::size_t> ids(users.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i + 1;
  shuffle(ids.begin(), ids.end(), layout_rng);
  for (std::size_t i = 0; i < users.size(); ++i) users[i].name = user_name(ids[i]);

  Json expected;
  expected["mass_alignment"] = number(spec.mass_alignment);
  expected["seed"] = spec.seed;
  std::ostringstream conf;
  conf << "# Fixture corpus written by polardec-synth; regenerate rather than edit.\n"
       << "output_dir = out\n"
       << "seed = " << spec.seed << "\n"
       << "topics = " << spec.topics[0] << ", " << spec.topics[1] << "\n"
       << "runs = 100\n"
       << "runs_per_k = 10\n"
       << "bootstrap_samples = 500\n"
       << "shuffles = 100\n"
       << "null_runs = 100\n"
       << "null_runs_per_k = 10\n"
       << "min_overlap = 10\n";

  for (std::size_t si = 0; si < spec.snapshots.size(); ++si) {
    const auto& snap = spec.snapshots[si];
    Rng rng = make_rng(spec.seed, {si + 1});
    const TimeWindow window{TimePoint(snap.start),
                            TimePoint(snap.start) + std::chrono::days(snap.days) -
                                std::chrono::seconds(1)};

    std::array<std::vector<Group>, 2> stance;
    for (const auto& u : users) stance[0].push_back(u.group);
    for (const auto& u : users) {
      Group g = u.group;
      if (u.stratum == Stratum::Periphery && uniform01(rng) >= spec.mass_alignment) {
        g = uniform01(rng) < 0.5 ? Group::A : Group::B;
      }
      stance[1].push_back(g);
    }

    std::vector<InteractionRecord> records;
    auto add = [&](const std::string& s, const std::string& t, std::vector<std::string> topics,
                   TimePoint when) { records.push_back({s, t, when, std::move(topics)}); };

    for (std::size_t ti = 0; ti < 2; ++ti) {
      const auto& topic = spec.topics[ti];
      for (std::size_t u = 0; u < users.size(); ++u) {
        for (std::size_t v = u + 1; v < users.size(); ++v) {
          const bool same = stance[ti][u] == stance[ti][v];
          const double p = same ? bundle(spec.within, users[u].stratum, users[v].stratum)
                                : spec.p_cross;
          if (uniform01(rng) >= p) continue;
          const auto copies = 1 + uniform_index(rng, 3);
          for (std::uint64_t c = 0; c < copies; ++c) {
            const std::size_t* core = nullptr;
            const std::size_t* per = nullptr;
            if (same && users[u].stratum != users[v].stratum) {
              core = users[u].stratum == Stratum::Core ? &u : &v;
              per = core == &u ? &v : &u;
            }
            std::size_t src = u, dst = v;
            if (core) {
              const bool toward = uniform01(rng) < spec.toward_core;
              src = toward ? *per : *core;
              dst = toward ? *core : *per;
            } else if (rng() & 1) {
              std::swap(src, dst);
            }
            add(users[src].name, users[dst].name, {topic}, draw_time(spec, snap, rng));
          }
        }
      }
      // A small component outside the main network.
      const std::string iso = "zz_" + topic + "_";
      add(iso + "1", iso + "2", {topic}, draw_time(spec, snap, rng));
      add(iso + "2", iso + "3", {topic}, draw_time(spec, snap, rng));
      add(iso + "3", iso + "1", {topic}, draw_time(spec, snap, rng));
    }
    // Cross-topic records, self-loops and out-of-window records.
    for (int i = 0; i < 25; ++i) {
      const auto& a = users[uniform_index(rng, users.size())].name;
      const auto& b = users[uniform_index(rng, users.size())].name;
      add(a, b, {spec.topics[0], spec.topics[1]}, draw_time(spec, snap, rng));
    }
    for (int i = 0; i < 8; ++i) {
      const auto& a = users[uniform_index(rng, users.size())].name;
      add(a, a, {spec.topics[i % 2]}, draw_time(spec, snap, rng));
    }
    for (int i = 0; i < 15; ++i) {
      const auto& a = users[uniform_index(rng, users.size())].name;
      const auto& b = users[uniform_index(rng, users.size())].name;
      add(a, b, {spec.topics[i % 2]},
          window.start - std::chrono::days(1 + static_cast<int>(uniform_index(rng, 10))));
    }
    std::stable_sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
      return std::tie(x.timestamp, x.source, x.target) < std::tie(y.timestamp, y.source, y.target);
    });

    std::ostringstream rows;
    write_rows(rows, records);
    const std::string input = snap.id + ".csv";
    write_file_atomic(dir / input, rows.str());

    std::ostringstream roster;
    write_csv_row(roster, {"user", "party", "leaning"});
    static const std::array<std::array<std::pair<const char*, const char*>, 3>, 2> parties{{
        {{{"SDP", "left"}, {"GREEN", "left"}, {"LEFT", "left"}}},
        {{{"NCP", "right"}, {"FIN", "right"}, {"CENTER", "other"}}},
    }};
    std::vector<std::size_t> order(users.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return users[a].name < users[b].name; });
    for (std::size_t i : order) {
      const auto& u = users[i];
      const double rate =
          u.stratum == Stratum::Core ? spec.core_candidates : spec.periphery_candidates;
      if (uniform01(rng) >= rate) continue;
      const auto& [party, leaning] = parties[index(u.group)][uniform_index(rng, 3)];
      write_csv_row(roster, {u.name, party, leaning});
    }
    const std::string roster_file = "roster_" + snap.id + ".csv";
    std::ostringstream planted;
    write_csv_row(planted, {"user", "group_" + spec.topics[0], "group_" + spec.topics[1], "stratum"});
    for (std::size_t i : order) {
      write_csv_row(planted, {users[i].name, to_string(stance[0][i]), to_string(stance[1][i]),
                              to_string(users[i].stratum)});
    }
    write_file_atomic(dir / ("planted_" + snap.id + ".csv"), planted.str());
    write_file_atomic(dir / roster_file, roster.str());

    // Planted AEI on exactly the networks the pipeline builds.
    auto in_window = filter_window(records, window).records;
    auto single = filter_cross_topic(std::move(in_window)).records;
    std::map<std::string, std::size_t> user_index;
    for (std::size_t i = 0; i < users.size(); ++i) user_index[users[i].name] = i;
    for (std::size_t ti = 0; ti < 2; ++ti) {
      std::vector<InteractionRecord> topic_records;
      for (const auto& r : single) {
        if (r.topics.front() == spec.topics[ti]) topic_records.push_back(r);
      }
      BuildOptions build;
      build.window = window;
      auto network = build_topic_network(topic_records, spec.topics[ti], build);
      std::vector<Group> groups;
      std::vector<Stratum> strata;
      for (const auto& name : network.nodes) {
        const auto u = user_index.at(name);
        groups.push_back(stance[ti][u]);
        strata.push_back(users[u].stratum);
      }
      auto counts = count_links(network.graph, groups, strata);
      expected["snapshots"][snap.id][spec.topics[ti]] = {
          {"aei", number(aei(counts))},
          {"nodes", network.nodes.size()},
          {"edges", network.graph.num_edges()},
          {"size_A", counts[Group::A].size},
          {"size_B", counts[Group::B].size}};
    }

    const auto end = format_rfc3339(window.end);
    conf << "snapshot." << snap.id << ".input = " << input << "\n"
         << "snapshot." << snap.id << ".window = " << format_rfc3339(window.start) << "/" << end
         << "\n"
         << "snapshot." << snap.id << ".roster = " << roster_file << "\n";
  }
  write_file_atomic(dir / "polardec.conf", conf.str());
  write_file_atomic(dir / "expected.json", dump_json(expected));
  return expected;
}

}  // namespace polardec
