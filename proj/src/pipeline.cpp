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
#include "polardec/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "polardec/activity.hpp"
#include "polardec/ingest.hpp"
#include "polardec/polarization.hpp"
#include "polardec/random.hpp"
#include "polardec/report.hpp"
#include "polardec/types.hpp"
#include "polardec/validate.hpp"

namespace polardec {
namespace fs = std::filesystem;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Partition: return "partition";
    case Stage::Hierarchy: return "hierarchy";
    case Stage::Decompose: return "decompose";
    case Stage::Marginal: return "marginal";
    case Stage::Align: return "align";
    case Stage::Activity: return "activity";
    case Stage::Validate: return "validate";
    case Stage::Report: return "report";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (Stage st : kStages) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

int StageOutcome::exit_code() const {
  if (input_errors > 0) return 1;
  if (refused > 0) return 2;
  return 0;
}

void StageOutcome::merge(const StageOutcome& other) {
  written.insert(written.end(), other.written.begin(), other.written.end());
  messages.insert(messages.end(), other.messages.begin(), other.messages.end());
  refused += other.refused;
  input_errors += other.input_errors;
}

// ---------------------------------------------------------------------------
// Artifact serialization

Json partition_json(std::span<const std::string> nodes, const ModelSelection& selection,
                    const Partition& partition) {
  Json j;
  j["k_star"] = selection.k_star;
  j["assortative"] = partition.assortative;
  j["description_length"] = {{"k1", number(selection.best_k1.description_length)},
                             {"k2", number(selection.best_k2.description_length)}};
  j["converged"] = {{"k1", selection.best_k1.converged}, {"k2", selection.best_k2.converged}};
  j["runs"] = partition.runs;
  j["left_group"] = partition.left_group ? Json(to_string(*partition.left_group)) : Json(nullptr);
  j["warnings"] = partition.warnings;
  j["sizes"] = {{"A", partition.size(Group::A)}, {"B", partition.size(Group::B)}};
  Json node_map = Json::object();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    node_map[nodes[i]] = {{"group", to_string(partition.group_of[i])},
                          {"prob_A", number(partition.prob_a[i])}};
  }
  j["nodes"] = std::move(node_map);
  return j;
}

Partition partition_from_json(const Json& j, std::span<const std::string> nodes) {
  Partition p;
  p.assortative = j.at("assortative").get<bool>();
  p.runs = j.at("runs").get<std::size_t>();
  if (!j.at("left_group").is_null()) p.left_group = parse_group(j["left_group"].get<std::string>());
  p.warnings = j.value("warnings", std::vector<std::string>{});
  const auto& node_map = j.at("nodes");
  p.group_of.reserve(nodes.size());
  p.prob_a.reserve(nodes.size());
  for (const auto& name : nodes) {
    auto it = node_map.find(name);
    if (it == node_map.end()) throw InputError("partition artifact lacks node " + name);
    p.group_of.push_back(parse_group(it->at("group").get<std::string>()));
    p.prob_a.push_back(it->at("prob_A").get<double>());
  }
  return p;
}

namespace {

Json densities_json(const Densities& d) {
  return {{"cc", number(d.cc)}, {"cp", number(d.cp)}, {"pp", number(d.pp)}};
}

double density_from_json(const Json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

Json hierarchy_json(std::span<const std::string> nodes, const Partition& partition,
                    const HierarchyLabels& h) {
  Json j;
  j["refused"] = false;
  j["runs"] = h.runs;
  j["significant"] = h.significant();
  Json groups = Json::object();
  for (Group g : {Group::A, Group::B}) {
    const auto& info = h.groups[index(g)];
    groups[std::string(to_string(g))] = {
        {"significant", info.significant},
        {"dl_core_periphery", number(info.dl_core_periphery)},
        {"dl_er", number(info.dl_er)},
        {"densities", densities_json(info.densities)},
        {"size", info.size},
        {"core_size", info.core_size},
        {"weak", info.weak},
        {"warnings", info.warnings},
    };
  }
  j["groups"] = std::move(groups);
  Json node_map = Json::object();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    node_map[nodes[i]] = {{"group", to_string(partition.group_of[i])},
                          {"label", to_string(h.stratum[i])},
                          {"prob_core", number(h.prob_core[i])}};
  }
  j["nodes"] = std::move(node_map);
  return j;
}

HierarchyLabels hierarchy_from_json(const Json& j, std::span<const std::string> nodes) {
  HierarchyLabels h;
  h.runs = j.at("runs").get<std::size_t>();
  for (Group g : {Group::A, Group::B}) {
    const auto& src = j.at("groups").at(std::string(to_string(g)));
    auto& info = h.groups[index(g)];
    info.significant = src.at("significant").get<bool>();
    info.dl_core_periphery = src.at("dl_core_periphery").get<double>();
    info.dl_er = src.at("dl_er").get<double>();
    const auto& d = src.at("densities");
    info.densities = {density_from_json(d.at("cc")), density_from_json(d.at("cp")),
                      density_from_json(d.at("pp"))};
    info.size = src.at("size").get<std::size_t>();
    info.core_size = src.at("core_size").get<std::size_t>();
    info.weak = src.at("weak").get<bool>();
    info.warnings = src.at("warnings").get<std::vector<std::string>>();
  }
  const auto& node_map = j.at("nodes");
  for (const auto& name : nodes) {
    auto it = node_map.find(name);
    if (it == node_map.end()) throw InputError("hierarchy artifact lacks node " + name);
    h.stratum.push_back(parse_stratum(it->at("label").get<std::string>()));
    h.prob_core.push_back(it->at("prob_core").get<double>());
  }
  return h;
}

Json nmi_json(const StratumAlignment& a, bool adjusted) {
  return {{"users", a.users},
          {"nmi", number(a.value(adjusted))},
          {"nmi_plain", number(a.plain.value)},
          {"nmi_plain_raw", number(a.plain.raw)},
          {"nmi_adjusted", number(a.adjusted.value)},
          {"nmi_adjusted_raw", number(a.adjusted.raw)}};
}

Json bootstrap_json(const BootstrapSummary& b) {
  return {{"mean", number(b.mean)},
          {"lower", number(b.lower)},
          {"upper", number(b.upper)},
          {"samples", b.samples},
          {"skipped", b.skipped}};
}

Json alignment_pair_json(std::string_view first, std::string_view second,
                         const StanceVectors& vectors, const AlignmentResult& point,
                         const BootstrapResult& boot, bool adjusted) {
  Json j;
  j["topics"] = {first, second};
  j["shared_users"] = vectors.users.size();
  j["mixed"] = point.mixed;
  j["oriented"] = vectors.oriented;
  j["label_basis"] = vectors.oriented ? "leaning" : "group";
  j["warnings"] = vectors.warnings;
  j["elite"] = nmi_json(point.elite, adjusted);
  j["elite"]["bootstrap"] = bootstrap_json(boot.elite);
  j["mass"] = nmi_json(point.mass, adjusted);
  j["mass"]["bootstrap"] = bootstrap_json(boot.mass);
  j["pooled"] = nmi_json(point.pooled, adjusted);
  return j;
}

Json validation_topic_json(const Enrichment& e, const PartyDistribution& pd,
                           std::optional<Group> left_group) {
  Json tj;
  tj["refused"] = false;
  tj["gamma"] = number(e.gamma);
  tj["gamma_undefined"] = e.undefined;
  tj["core_candidates"] = e.core_candidates;
  tj["core_size"] = e.core_size;
  tj["periphery_candidates"] = e.periphery_candidates;
  tj["periphery_size"] = e.periphery_size;
  tj["left_group"] = left_group ? Json(to_string(*left_group)) : Json(nullptr);
  for (Group g : {Group::A, Group::B}) {
    Json gj;
    gj["by_party"] = pd.by_party[index(g)];
    for (Leaning le : {Leaning::Left, Leaning::Right, Leaning::Other}) {
      gj["by_leaning"][std::string(to_string(le))] =
          pd.by_leaning[index(g)][static_cast<std::size_t>(le)];
      gj["share"][std::string(to_string(le))] = number(pd.share(g, le));
    }
    tj["groups"][std::string(to_string(g))] = std::move(gj);
  }
  return tj;
}

// ---------------------------------------------------------------------------
// Stages

namespace {

struct Ctx {
  const RunConfig& config;
  const StageOptions& options;
  std::string hash;
  StageOutcome outcome;
};

fs::path snapshot_dir(const Ctx& ctx, const std::string& snap) {
  return ctx.config.output_dir / snap;
}

fs::path topic_file(const Ctx& ctx, const std::string& snap, const std::string& topic,
                    std::string_view suffix) {
  return snapshot_dir(ctx, snap) / (topic + "." + std::string(suffix));
}

std::uint64_t topic_seed(const Ctx& ctx, const std::string& snap, const std::string& topic,
                         Stage stage) {
  return derive_seed(ctx.config.seed,
                     {fnv1a(snap), fnv1a(topic), static_cast<std::uint64_t>(stage)});
}

Json stamped(const Ctx& ctx, Json j, Stage stage, const std::string& snap,
             const std::optional<std::string>& topic = std::nullopt) {
  j["config_hash"] = ctx.hash;
  j["seed"] = ctx.config.seed;
  j["stage"] = to_string(stage);
  j["snapshot"] = snap;
  if (topic) j["topic"] = *topic;
  return j;
}

void emit(Ctx& ctx, const fs::path& path, std::string_view contents) {
  write_file_atomic(path, contents);
  ctx.outcome.written.push_back(path);
}

void emit_json(Ctx& ctx, const fs::path& path, const Json& j) { emit(ctx, path, dump_json(j)); }

Json refusal(std::string reason) { return {{"refused", true}, {"reason", std::move(reason)}}; }

void note_refusal(Ctx& ctx, const std::string& where, const std::string& reason) {
  ++ctx.outcome.refused;
  ctx.outcome.messages.push_back(where + ": refused: " + reason);
}

/// Reads an artifact produced by `producer`, refusing stale ones.
Json require(const Ctx& ctx, const fs::path& path, Stage producer) {
  if (!fs::exists(path)) {
    throw InputError("missing " + path.string() + "; run the '" + std::string(to_string(producer)) +
                     "' stage first");
  }
  Json j = read_json(path);
  if (j.value("config_hash", std::string()) != ctx.hash) {
    throw InputError(path.string() + " was produced with a different configuration; rerun the '" +
                     std::string(to_string(producer)) + "' stage");
  }
  return j;
}

std::vector<std::string> ingested_topics(const Ctx& ctx, const std::string& snap,
                                         bool honor_filter) {
  Json ingest = require(ctx, snapshot_dir(ctx, snap) / "ingest.json", Stage::Ingest);
  auto topics = ingest.at("topics").get<std::vector<std::string>>();
  if (honor_filter && ctx.options.topic) {
    if (std::find(topics.begin(), topics.end(), *ctx.options.topic) == topics.end()) {
      throw InputError("topic '" + *ctx.options.topic + "' has no ingested network in snapshot " +
                       snap);
    }
    return {*ctx.options.topic};
  }
  return topics;
}

struct LoadedTopic {
  TopicNetwork network;
  std::vector<InteractionRecord> records;
};

LoadedTopic load_topic(const Ctx& ctx, const std::string& snap, const std::string& topic) {
  Json meta = require(ctx, topic_file(ctx, snap, topic, "meta.json"), Stage::Ingest);
  std::ifstream in(topic_file(ctx, snap, topic, "records.csv"), std::ios::binary);
  if (!in) throw InputError("missing records for " + topic + "; run the 'ingest' stage first");
  ColumnSchema schema;
  schema.delimiter = ',';
  schema.strict = true;
  LoadedTopic t;
  t.records = parse_interactions(in, schema).records;
  BuildOptions build;
  build.min_nodes = ctx.config.min_nodes;
  build.window = TimeWindow{*parse_rfc3339(meta.at("window").at("start").get<std::string>()),
                            *parse_rfc3339(meta.at("window").at("end").get<std::string>())};
  t.network = build_topic_network(t.records, topic, build);
  if (t.network.nodes.size() != meta.at("nodes").get<std::size_t>() ||
      t.network.graph.num_edges() != meta.at("edges").get<std::size_t>()) {
    throw std::runtime_error("rebuilt network for " + topic + " disagrees with its ingest metadata");
  }
  return t;
}

std::vector<std::string> node_names(const Json& partition) {
  std::vector<std::string> names;
  for (const auto& [name, _] : partition.at("nodes").items()) names.push_back(name);
  std::sort(names.begin(), names.end());
  return names;
}

std::optional<CandidateRoster> load_roster(const SnapshotConfig& snap) {
  if (!snap.roster) return std::nullopt;
  std::ifstream in(*snap.roster);
  if (!in) throw InputError("cannot read roster " + snap.roster->string());
  return read_roster(in);
}

// --- ingest ---------------------------------------------------------------

void stage_ingest(Ctx& ctx, const SnapshotConfig& snap) {
  ColumnSchema schema;
  schema.delimiter = ctx.config.delimiter;
  schema.strict = ctx.config.strict;

  Json summary;
  Json inputs = Json::array();
  std::vector<InteractionRecord> records;
  for (const auto& path : snap.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read input " + path.string());
    auto parsed = parse_interactions(in, schema);
    inputs.push_back({{"file", path.filename().string()},
                      {"records", parsed.records.size()},
                      {"skipped", parsed.skipped},
                      {"header", parsed.header},
                      {"warnings", parsed.warnings}});
    std::move(parsed.records.begin(), parsed.records.end(), std::back_inserter(records));
  }
  summary["inputs"] = std::move(inputs);

  std::size_t outside = 0;
  if (snap.window) {
    auto filtered = filter_window(std::move(records), *snap.window);
    records = std::move(filtered.records);
    outside = filtered.outside;
  }
  summary["outside_window"] = outside;
  auto single = filter_cross_topic(std::move(records));
  summary["cross_topic_removed"] = single.removed;

  std::map<std::string, std::vector<InteractionRecord>> by_topic;
  for (auto& r : single.records) by_topic[r.topics.front()].push_back(std::move(r));

  std::vector<std::string> topics = ctx.config.topics;
  if (topics.empty()) {
    for (const auto& [t, _] : by_topic) topics.push_back(t);
  }
  std::sort(topics.begin(), topics.end());

  Json built = Json::array();
  Json failed = Json::object();
  Json counts = Json::object();
  for (const auto& topic : topics) {
    const auto& topic_records = by_topic[topic];
    counts[topic] = topic_records.size();
    BuildOptions build;
    build.min_nodes = ctx.config.min_nodes;
    build.window = snap.window;
    TopicNetwork network;
    try {
      network = build_topic_network(topic_records, topic, build);
    } catch (const InputError& e) {
      failed[topic] = e.what();
      ++ctx.outcome.input_errors;
      ctx.outcome.messages.push_back(snap.id + "/" + topic + ": " + e.what());
      continue;
    }
    built.push_back(topic);

    std::ostringstream edges, rows;
    write_edge_list(edges, network);
    write_records(rows, topic_records);
    emit(ctx, topic_file(ctx, snap.id, topic, "edges.csv"), edges.str());
    emit(ctx, topic_file(ctx, snap.id, topic, "records.csv"), rows.str());

    Json meta;
    meta["nodes"] = network.nodes.size();
    meta["edges"] = network.graph.num_edges();
    meta["directed_pairs"] = network.directed_counts.size();
    meta["records"] = topic_records.size();
    meta["window"] = {{"start", format_rfc3339(network.window.start)},
                      {"end", format_rfc3339(network.window.end)}};
    emit_json(ctx, topic_file(ctx, snap.id, topic, "meta.json"),
              stamped(ctx, meta, Stage::Ingest, snap.id, topic));
  }
  summary["topics"] = std::move(built);
  summary["failed"] = std::move(failed);
  summary["records_per_topic"] = std::move(counts);
  if (snap.window) {
    summary["window"] = {{"start", format_rfc3339(snap.window->start)},
                         {"end", format_rfc3339(snap.window->end)}};
  } else {
    summary["window"] = nullptr;
  }
  emit_json(ctx, snapshot_dir(ctx, snap.id) / "ingest.json",
            stamped(ctx, summary, Stage::Ingest, snap.id));
}

// --- partition ------------------------------------------------------------

void stage_partition(Ctx& ctx, const SnapshotConfig& snap, const std::string& topic) {
  auto t = load_topic(ctx, snap.id, topic);
  const auto& g = t.network.graph;
  const std::uint64_t seed = topic_seed(ctx, snap.id, topic, Stage::Partition);
  auto selection = select_model(g, ctx.config.runs_per_k, seed, ctx.options.jobs);
  Partition partition = non_assortative_partition(g.num_nodes());
  if (selection.assortative()) {
    try {
      partition = consensus_partition(g, ctx.config.runs, derive_seed(seed, {1}), ctx.options.jobs);
    } catch (const RefusalError& e) {
      selection.k_star = 1;
      partition.warnings.push_back(e.what());
    }
  }
  if (auto roster = load_roster(snap)) {
    partition = orient_groups(std::move(partition), t.network.nodes, leanings(*roster));
  }
  emit_json(ctx, topic_file(ctx, snap.id, topic, "partition.json"),
            stamped(ctx, partition_json(t.network.nodes, selection, partition), Stage::Partition,
                    snap.id, topic));
  if (!partition.assortative) {
    note_refusal(ctx, snap.id + "/" + topic, "no assortative two-group structure (k* = 1)");
  }
}

// --- hierarchy ------------------------------------------------------------

void stage_hierarchy(Ctx& ctx, const SnapshotConfig& snap, const std::string& topic) {
  Json pj = require(ctx, topic_file(ctx, snap.id, topic, "partition.json"), Stage::Partition);
  const auto path = topic_file(ctx, snap.id, topic, "hierarchy.json");
  if (!pj.at("assortative").get<bool>()) {
    const std::string reason = "no assortative two-group structure (k* = 1)";
    emit_json(ctx, path, stamped(ctx, refusal(reason), Stage::Hierarchy, snap.id, topic));
    note_refusal(ctx, snap.id + "/" + topic, reason);
    return;
  }
  auto t = load_topic(ctx, snap.id, topic);
  Partition partition = partition_from_json(pj, t.network.nodes);
  auto h = consensus_hierarchy(partition, t.network.graph, ctx.config.runs,
                               topic_seed(ctx, snap.id, topic, Stage::Hierarchy),
                               ctx.options.jobs);
  emit_json(ctx, path,
            stamped(ctx, hierarchy_json(t.network.nodes, partition, h), Stage::Hierarchy, snap.id,
                    topic));
  if (!h.significant()) {
    ctx.outcome.messages.push_back(snap.id + "/" + topic +
                                   ": hierarchy not significant in at least one group");
  }
}

struct Labelled {
  LoadedTopic topic;
  Partition partition;
  HierarchyLabels hierarchy;
};

/// Loads network, partition and hierarchy; unset (with the refusal reason
/// in `reason`) when the hierarchy stage refused the topic.
std::optional<Labelled> load_labelled(const Ctx& ctx, const std::string& snap,
                                      const std::string& topic, std::string& reason) {
  Json hj = require(ctx, topic_file(ctx, snap, topic, "hierarchy.json"), Stage::Hierarchy);
  if (hj.value("refused", false)) {
    reason = hj.value("reason", std::string("refused upstream"));
    return std::nullopt;
  }
  Json pj = require(ctx, topic_file(ctx, snap, topic, "partition.json"), Stage::Partition);
  Labelled l;
  l.topic = load_topic(ctx, snap, topic);
  l.partition = partition_from_json(pj, l.topic.network.nodes);
  l.hierarchy = hierarchy_from_json(hj, l.topic.network.nodes);
  return l;
}

// --- decompose ------------------------------------------------------------

Json group_counts_json(const GroupCounts& g) {
  return {{"size", g.size},
          {"core_size", g.core_size},
          {"core_core", g.core_core},
          {"core_periphery", g.core_periphery},
          {"periphery_periphery", g.periphery_periphery},
          {"internal", g.internal()},
          {"cross_from_core", g.cross[0]},
          {"cross_from_periphery", g.cross[1]}};
}

void stage_decompose(Ctx& ctx, const SnapshotConfig& snap, const std::string& topic) {
  const auto dpath = topic_file(ctx, snap.id, topic, "decomposition.json");
  const auto npath = topic_file(ctx, snap.id, topic, "null.json");
  std::string reason;
  auto l = load_labelled(ctx, snap.id, topic, reason);
  if (!l) {
    emit_json(ctx, dpath, stamped(ctx, refusal(reason), Stage::Decompose, snap.id, topic));
    emit_json(ctx, npath, stamped(ctx, refusal(reason), Stage::Decompose, snap.id, topic));
    note_refusal(ctx, snap.id + "/" + topic, reason);
    return;
  }
  const auto& g = l->topic.network.graph;
  const bool hierarchical = l->hierarchy.significant();
  LinkCounts counts = hierarchical ? count_links(g, l->partition, l->hierarchy)
                                   : count_group_links(g, l->partition);
  auto d = decompose(counts);

  Json j;
  j["refused"] = false;
  j["aei"] = number(d.aei);
  j["alpha"] = number(d.alpha);
  j["bridge"] = number(d.bridge);
  j["hierarchical"] = hierarchical;
  if (!hierarchical) {
    j["note"] = "hierarchy not significant in at least one group; group-level terms only";
  }
  double sum = 0.0;
  Json groups = Json::object();
  for (Group grp : {Group::A, Group::B}) {
    const auto gi = index(grp);
    Json gj;
    gj["hat_i_c"] = hierarchical ? number(d.components[gi][0]) : Json(nullptr);
    gj["hat_i_cp"] = hierarchical ? number(d.components[gi][1]) : Json(nullptr);
    gj["hat_i_p"] = hierarchical ? number(d.components[gi][2]) : Json(nullptr);
    gj["share"] = number(d.group_share[gi]);
    gj["counts"] = group_counts_json(counts.groups[gi]);
    groups[std::string(to_string(grp))] = std::move(gj);
    sum += d.group_share[gi];
  }
  j["groups"] = std::move(groups);
  j["between"] = counts.between;
  j["identity_residual"] = number(sum - d.bridge - d.aei);
  emit_json(ctx, dpath, stamped(ctx, j, Stage::Decompose, snap.id, topic));

  Json nj;
  if (ctx.config.shuffles == 0) {
    nj["skipped"] = true;
    nj["reason"] = "shuffles = 0";
  } else {
    NullOptions opt;
    opt.shuffles = ctx.config.shuffles;
    opt.swaps_per_edge = ctx.config.swaps_per_edge;
    opt.pipeline.runs_per_k = ctx.config.null_runs_per_k;
    opt.pipeline.consensus_runs = ctx.config.null_runs;
    auto null = null_adjusted_aei(g, d.aei, opt, derive_seed(topic_seed(ctx, snap.id, topic,
                                                                          Stage::Decompose),
                                                              {1}),
                                  ctx.options.jobs);
    nj["skipped"] = false;
    nj["aei_observed"] = number(null.observed);
    nj["aei_null_mean"] = number(null.null_mean);
    nj["explained_fraction"] = number(null.explained_fraction);
    Json values = Json::array();
    for (double v : null.null_values) values.push_back(number(v));
    nj["null_values"] = std::move(values);
    nj["null_assortative"] = null.null_assortative;
    nj["shuffles"] = opt.shuffles;
    nj["swaps_per_edge"] = opt.swaps_per_edge;
    nj["null_runs"] = opt.pipeline.consensus_runs;
    nj["null_runs_per_k"] = opt.pipeline.runs_per_k;
  }
  nj["refused"] = false;
  emit_json(ctx, npath, stamped(ctx, nj, Stage::Decompose, snap.id, topic));
}

// --- marginal -------------------------------------------------------------

void stage_marginal(Ctx& ctx, const SnapshotConfig& snap, const std::string& topic) {
  const auto path = topic_file(ctx, snap.id, topic, "marginal.json");
  std::string reason;
  auto l = load_labelled(ctx, snap.id, topic, reason);
  if (l && !l->hierarchy.significant()) {
    reason = "hierarchy not significant in at least one group";
    l.reset();
  }
  if (!l) {
    emit_json(ctx, path, stamped(ctx, refusal(reason), Stage::Marginal, snap.id, topic));
    note_refusal(ctx, snap.id + "/" + topic, reason);
    return;
  }
  auto counts = count_links(l->topic.network.graph, l->partition, l->hierarchy);
  const std::uint64_t seed = topic_seed(ctx, snap.id, topic, Stage::Marginal);
  std::vector<MarginalEntry> entries;
  Json list = Json::array();
  for (Group g : {Group::A, Group::B}) {
    for (Stratum s : {Stratum::Core, Stratum::Periphery}) {
      Json e = {{"group", to_string(g)}, {"stratum", to_string(s)}};
      try {
        auto m = marginal(counts, g, s, derive_seed(seed, {index(g), index(s)}),
                          ctx.config.marginal_draws);
        entries.push_back(m);
        e["formula"] = number(m.formula);
        e["oracle"] = number(m.oracle);
        e["mean_within"] = number(m.mean_within);
        e["mean_cp"] = number(m.mean_cp);
        e["mean_out"] = number(m.mean_out);
        e["stratum_size"] = m.stratum_size;
      } catch (const std::domain_error& err) {
        e["error"] = err.what();
      }
      list.push_back(std::move(e));
    }
  }
  Json weighted = Json::object();
  for (Stratum s : {Stratum::Core, Stratum::Periphery}) {
    Json w;
    try {
      w["formula"] = number(weighted_mean_marginal(entries, s, false));
      w["oracle"] = number(weighted_mean_marginal(entries, s, true));
    } catch (const std::domain_error&) {
      w = nullptr;
    }
    weighted[std::string(to_string(s))] = std::move(w);
  }
  Json j;
  j["refused"] = false;
  j["entries"] = std::move(list);
  j["weighted_mean"] = std::move(weighted);
  j["draws"] = ctx.config.marginal_draws;
  emit_json(ctx, path, stamped(ctx, j, Stage::Marginal, snap.id, topic));
}

// --- align ----------------------------------------------------------------

void stage_align(Ctx& ctx, const SnapshotConfig& snap) {
  const auto topics = ingested_topics(ctx, snap.id, false);
  const bool adjusted = ctx.config.adjusted_nmi;
  std::map<std::string, TopicStances> stances;
  Json excluded = Json::object();
  for (const auto& topic : topics) {
    Json hj = require(ctx, topic_file(ctx, snap.id, topic, "hierarchy.json"), Stage::Hierarchy);
    if (hj.value("refused", false)) {
      excluded[topic] = hj.value("reason", std::string("refused upstream"));
      continue;
    }
    Json pj = require(ctx, topic_file(ctx, snap.id, topic, "partition.json"), Stage::Partition);
    auto names = node_names(pj);
    stances[topic] = topic_stances(names, partition_from_json(pj, names),
                                   hierarchy_from_json(hj, names));
  }

  Json pairs = Json::object();
  std::ostringstream csv;
  write_csv_row(csv, {"topic1", "topic2", "stratum", "users", "nmi", "nmi_plain", "nmi_adjusted",
                      "bootstrap_mean", "bootstrap_lower", "bootstrap_upper", "bootstrap_samples",
                      "bootstrap_skipped"});
  std::vector<std::string> usable;
  for (const auto& [t, _] : stances) usable.push_back(t);
  for (std::size_t i = 0; i < usable.size(); ++i) {
    for (std::size_t k = i + 1; k < usable.size(); ++k) {
      const auto& t1 = usable[i];
      const auto& t2 = usable[k];
      const std::string key = t1 + "|" + t2;
      try {
        auto vectors = stance_vectors(stances[t1], stances[t2], ctx.config.min_overlap);
        auto point = alignment_by_hierarchy(vectors, ctx.config.min_overlap);
        auto boot = bootstrap_alignment(
            vectors, ctx.config.bootstrap_samples,
            derive_seed(ctx.config.seed, {fnv1a(snap.id), fnv1a(key), 0x616c69676eULL}), adjusted,
            ctx.options.jobs);
        pairs[key] = alignment_pair_json(t1, t2, vectors, point, boot, adjusted);
        auto row = [&](std::string_view stratum, const StratumAlignment& a,
                       const BootstrapSummary* b) {
          write_csv_row(csv, {t1, t2, stratum, std::to_string(a.users),
                              format_number(a.value(adjusted)), format_number(a.plain.value),
                              format_number(a.adjusted.value), b ? format_number(b->mean) : "",
                              b ? format_number(b->lower) : "", b ? format_number(b->upper) : "",
                              b ? std::to_string(b->samples) : "",
                              b ? std::to_string(b->skipped) : ""});
        };
        row("elite", point.elite, &boot.elite);
        row("mass", point.mass, &boot.mass);
        row("pooled", point.pooled, nullptr);
      } catch (const InputError& e) {
        pairs[key] = {{"topics", {t1, t2}}, {"error", e.what()}};
        ctx.outcome.messages.push_back(snap.id + "/" + key + ": " + e.what());
      }
    }
  }
  Json j;
  j["adjusted"] = adjusted;
  j["topics"] = usable;
  j["excluded"] = std::move(excluded);
  j["pairs"] = std::move(pairs);
  if (usable.size() < 2) j["note"] = "fewer than two analysable topics; no pairwise alignment";
  j["bootstrap_samples"] = ctx.config.bootstrap_samples;
  emit_json(ctx, snapshot_dir(ctx, snap.id) / "alignment.json",
            stamped(ctx, j, Stage::Align, snap.id));
  emit(ctx, snapshot_dir(ctx, snap.id) / "alignment.csv", csv.str());
}

// --- activity -------------------------------------------------------------

void stage_activity(Ctx& ctx, const SnapshotConfig& snap, const std::string& topic) {
  const auto path = topic_file(ctx, snap.id, topic, "amplification.json");
  std::string reason;
  auto l = load_labelled(ctx, snap.id, topic, reason);
  if (!l) {
    emit_json(ctx, path, stamped(ctx, refusal(reason), Stage::Activity, snap.id, topic));
    note_refusal(ctx, snap.id + "/" + topic, reason);
    return;
  }
  auto series = activity_series(l->topic.records, l->topic.network, l->partition, l->hierarchy,
                                ctx.config.smoothing_days);
  std::ostringstream csv;
  write_csv_row(csv, {"date", "category", "raw", "smoothed", "unique_raw", "unique_smoothed"});
  Json peaks = Json::object();
  for (std::size_t b = 0; b < series.bins.size(); ++b) {
    const std::string date = format_rfc3339(series.bins[b]).substr(0, 10);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      write_csv_row(csv, {date, to_string(kCategories[c]), std::to_string(series.raw[c][b]),
                          format_number(series.smoothed[c][b]),
                          std::to_string(series.unique_raw[c][b]),
                          format_number(series.unique_smoothed[c][b])});
    }
  }
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const auto& s = series.smoothed[c];
    auto it = std::max_element(s.begin(), s.end());
    peaks[std::string(to_string(kCategories[c]))] =
        (it == s.end() || *it == 0.0)
            ? Json(nullptr)
            : Json(format_rfc3339(series.bins[static_cast<std::size_t>(it - s.begin())])
                       .substr(0, 10));
  }
  emit(ctx, topic_file(ctx, snap.id, topic, "activity.csv"), csv.str());

  auto amp = amplification_direction(l->topic.records, l->topic.network, l->partition,
                                     l->hierarchy);
  Json j;
  j["refused"] = false;
  for (Group g : {Group::A, Group::B}) {
    j["groups"][std::string(to_string(g))] = {{"toward_core", number(amp.toward_core[index(g)])},
                                              {"toward", amp.toward[index(g)]},
                                              {"total", amp.total[index(g)]}};
  }
  j["classified"] = series.classified;
  j["unclassifiable"] = series.unclassifiable;
  j["outside_window"] = series.outside_window;
  j["smoothing_days"] = series.smoothing_days;
  j["days"] = series.bins.size();
  j["smoothed_peak"] = std::move(peaks);
  j["hierarchy_significant"] = l->hierarchy.significant();
  emit_json(ctx, path, stamped(ctx, j, Stage::Activity, snap.id, topic));
}

// --- validate -------------------------------------------------------------

void stage_validate(Ctx& ctx, const SnapshotConfig& snap) {
  const auto topics = ingested_topics(ctx, snap.id, false);
  auto roster = load_roster(snap);
  Json j;
  Json per_topic = Json::object();
  if (!roster) {
    j["roster_size"] = nullptr;
    j["note"] = "no candidate roster configured for this snapshot";
  } else {
    j["roster_size"] = roster->size();
    for (const auto& topic : topics) {
      Json hj = require(ctx, topic_file(ctx, snap.id, topic, "hierarchy.json"), Stage::Hierarchy);
      if (hj.value("refused", false)) {
        per_topic[topic] = refusal(hj.value("reason", std::string("refused upstream")));
        continue;
      }
      Json pj = require(ctx, topic_file(ctx, snap.id, topic, "partition.json"), Stage::Partition);
      auto names = node_names(pj);
      auto partition = partition_from_json(pj, names);
      auto h = hierarchy_from_json(hj, names);
      per_topic[topic] = validation_topic_json(
          candidate_enrichment(names, h, *roster), party_distribution(names, partition, *roster),
          partition.left_group);
    }
  }
  j["topics"] = std::move(per_topic);
  emit_json(ctx, snapshot_dir(ctx, snap.id) / "validation.json",
            stamped(ctx, j, Stage::Validate, snap.id));
}

// --- report ---------------------------------------------------------------

void stage_report(Ctx& ctx) {
  std::vector<SnapshotArtifacts> snapshots;
  std::vector<std::string> missing;
  auto fetch = [&](const fs::path& path, Stage producer) -> Json {
    if (!fs::exists(path)) {
      missing.push_back(path.string() + " (stage '" + std::string(to_string(producer)) + "')");
      return nullptr;
    }
    Json j = read_json(path);
    if (j.value("config_hash", std::string()) != ctx.hash) {
      missing.push_back(path.string() + " is stale (stage '" + std::string(to_string(producer)) +
                        "')");
    }
    return j;
  };
  for (const auto& snap : ctx.config.snapshots) {
    SnapshotArtifacts s;
    s.id = snap.id;
    Json ingest = fetch(snapshot_dir(ctx, snap.id) / "ingest.json", Stage::Ingest);
    if (ingest.is_null()) continue;
    for (const auto& [topic, err] : ingest.at("failed").items()) {
      s.failed_topics[topic] = err.get<std::string>();
    }
    for (const auto& topic : ingest.at("topics").get<std::vector<std::string>>()) {
      TopicArtifacts t;
      t.topic = topic;
      t.partition = fetch(topic_file(ctx, snap.id, topic, "partition.json"), Stage::Partition);
      t.hierarchy = fetch(topic_file(ctx, snap.id, topic, "hierarchy.json"), Stage::Hierarchy);
      t.decomposition =
          fetch(topic_file(ctx, snap.id, topic, "decomposition.json"), Stage::Decompose);
      t.null_model = fetch(topic_file(ctx, snap.id, topic, "null.json"), Stage::Decompose);
      t.marginal = fetch(topic_file(ctx, snap.id, topic, "marginal.json"), Stage::Marginal);
      t.amplification =
          fetch(topic_file(ctx, snap.id, topic, "amplification.json"), Stage::Activity);
      const auto activity = topic_file(ctx, snap.id, topic, "activity.csv");
      if (fs::exists(activity)) t.activity_csv = snap.id + "/" + topic + ".activity.csv";
      s.topics.push_back(std::move(t));
    }
    s.alignment = fetch(snapshot_dir(ctx, snap.id) / "alignment.json", Stage::Align);
    s.validation = fetch(snapshot_dir(ctx, snap.id) / "validation.json", Stage::Validate);
    snapshots.push_back(std::move(s));
  }
  if (!missing.empty()) {
    std::string msg = "report: missing pieces:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw InputError(msg);
  }
  Json report = assemble_report(snapshots, ctx.config.adjusted_nmi);
  report["config_hash"] = ctx.hash;
  report["seed"] = ctx.config.seed;
  report["stage"] = "report";
  if (auto problems = validate_report(report); !problems.empty()) {
    std::string msg = "report failed schema validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::logic_error(msg);
  }
  emit_json(ctx, ctx.config.output_dir / "report.json", report);
  emit(ctx, ctx.config.output_dir / "report.csv", report_csv(report));
}

}  // namespace

StageOutcome run_stage(Stage stage, const RunConfig& config, const StageOptions& options) {
  Ctx ctx{config, options, config_hash(config), {}};
  if (stage == Stage::Report) {
    stage_report(ctx);
    return ctx.outcome;
  }
  for (const auto& snap : config.snapshots) {
    switch (stage) {
      case Stage::Ingest: stage_ingest(ctx, snap); continue;
      case Stage::Align: stage_align(ctx, snap); continue;
      case Stage::Validate: stage_validate(ctx, snap); continue;
      default: break;
    }
    for (const auto& topic : ingested_topics(ctx, snap.id, true)) {
      switch (stage) {
        case Stage::Partition: stage_partition(ctx, snap, topic); break;
        case Stage::Hierarchy: stage_hierarchy(ctx, snap, topic); break;
        case Stage::Decompose: stage_decompose(ctx, snap, topic); break;
        case Stage::Marginal: stage_marginal(ctx, snap, topic); break;
        case Stage::Activity: stage_activity(ctx, snap, topic); break;
        default: break;
      }
    }
  }
  return ctx.outcome;
}

StageOutcome run_all(const RunConfig& config, const StageOptions& options) {
  StageOutcome total;
  for (Stage stage : kStages) total.merge(run_stage(stage, config, options));
  return total;
}

}  // namespace polardec
