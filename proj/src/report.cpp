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
#include "polardec/report.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "report_schema.hpp"

namespace polardec {
namespace {

const Json kNull = nullptr;

const Json& get(const Json& j, const char* key) {
  if (!j.is_object()) return kNull;
  auto it = j.find(key);
  return it == j.end() ? kNull : *it;
}

const Json& get(const Json& j, std::initializer_list<const char*> path) {
  const Json* cur = &j;
  for (const char* key : path) cur = &get(*cur, key);
  return *cur;
}

bool refused(const Json& artifact) {
  return artifact.is_null() || get(artifact, "refused") == true;
}

std::optional<double> as_double(const Json& j) {
  if (!j.is_number()) return std::nullopt;
  return j.get<double>();
}

Json delta(const Json& from, const Json& to) {
  auto a = as_double(from);
  auto b = as_double(to);
  if (!a || !b) return nullptr;
  return number(*b - *a);
}

Json mean_of(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  double sum = 0.0;
  for (double v : values) sum += v;
  return number(sum / static_cast<double>(values.size()));
}

std::string cell(const Json& j) {
  if (j.is_null()) return {};
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_integer()) return j.dump();
  if (j.is_number()) return format_number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

}  // namespace

Json assemble_report(std::span<const SnapshotArtifacts> snapshots, bool adjusted_nmi) {
  Json report;
  report["adjusted_nmi"] = adjusted_nmi;
  Json ids = Json::array();
  Json structural = Json::array();
  Json decomposition = Json::array();
  Json marginal = Json::array();
  Json activity = Json::array();
  Json validation = Json::array();
  Json pairs = Json::array();
  Json summary = Json::array();
  Json failed = Json::array();
  Json notes = Json::array();

  for (const auto& snap : snapshots) {
    ids.push_back(snap.id);
    for (const auto& [topic, error] : snap.failed_topics) {
      failed.push_back({{"snapshot", snap.id}, {"topic", topic}, {"error", error}});
    }
    for (const auto& t : snap.topics) {
      const bool assortative = get(t.partition, "assortative") == true;
      Json row = {{"snapshot", snap.id}, {"topic", t.topic}};
      row["k_star"] = get(t.partition, "k_star");
      row["assortative"] = assortative;
      // A network without two-group structure has zero polarization.
      row["aei"] = assortative ? get(t.decomposition, "aei") : Json(0.0);
      row["aei_null_mean"] = get(t.null_model, "aei_null_mean");
      row["explained_fraction"] = get(t.null_model, "explained_fraction");
      structural.push_back(std::move(row));

      if (!refused(t.decomposition)) {
        Json d = {{"snapshot", snap.id}, {"topic", t.topic}};
        for (const char* key : {"hierarchical", "aei", "alpha", "bridge"}) {
          d[key] = get(t.decomposition, key);
        }
        for (const char* g : {"A", "B"}) {
          const auto& src = get(t.decomposition, {"groups", g});
          d["groups"][g] = {{"hat_i_c", get(src, "hat_i_c")},
                            {"hat_i_cp", get(src, "hat_i_cp")},
                            {"hat_i_p", get(src, "hat_i_p")},
                            {"share", get(src, "share")},
                            {"size", get(src, {"counts", "size"})},
                            {"core_size", get(src, {"counts", "core_size"})}};
        }
        decomposition.push_back(std::move(d));
      }
      if (!refused(t.marginal)) {
        marginal.push_back({{"snapshot", snap.id},
                            {"topic", t.topic},
                            {"weighted_mean", get(t.marginal, "weighted_mean")},
                            {"entries", get(t.marginal, "entries")}});
      }
      if (!refused(t.amplification)) {
        activity.push_back(
            {{"snapshot", snap.id},
             {"topic", t.topic},
             {"file", t.activity_csv},
             {"classified", get(t.amplification, "classified")},
             {"unclassifiable", get(t.amplification, "unclassifiable")},
             {"smoothed_peak", get(t.amplification, "smoothed_peak")},
             {"toward_core",
              {{"A", get(t.amplification, {"groups", "A", "toward_core"})},
               {"B", get(t.amplification, {"groups", "B", "toward_core"})}}}});
      }
    }

    for (const auto& [topic, v] : get(snap.validation, "topics").items()) {
      if (refused(v)) continue;
      validation.push_back({{"snapshot", snap.id},
                            {"topic", topic},
                            {"gamma", get(v, "gamma")},
                            {"gamma_undefined", get(v, "gamma_undefined")},
                            {"core_candidates", get(v, "core_candidates")},
                            {"core_size", get(v, "core_size")},
                            {"periphery_candidates", get(v, "periphery_candidates")},
                            {"periphery_size", get(v, "periphery_size")}});
    }

    std::vector<double> pooled, elite, mass;
    for (const auto& [key, p] : get(snap.alignment, "pairs").items()) {
      const auto& topics = get(p, "topics");
      Json row = {{"snapshot", snap.id}, {"topic1", topics.at(0)}, {"topic2", topics.at(1)}};
      if (get(p, "error").is_string()) {
        row["error"] = get(p, "error");
        for (const char* k : {"pooled", "elite", "mass"}) row[k] = nullptr;
        pairs.push_back(std::move(row));
        continue;
      }
      row["pooled"] = get(p, {"pooled", "nmi"});
      row["elite"] = get(p, {"elite", "nmi"});
      row["mass"] = get(p, {"mass", "nmi"});
      row["elite_users"] = get(p, {"elite", "users"});
      row["mass_users"] = get(p, {"mass", "users"});
      row["elite_lower"] = get(p, {"elite", "bootstrap", "lower"});
      row["elite_upper"] = get(p, {"elite", "bootstrap", "upper"});
      row["mass_lower"] = get(p, {"mass", "bootstrap", "lower"});
      row["mass_upper"] = get(p, {"mass", "bootstrap", "upper"});
      if (auto v = as_double(row["pooled"])) pooled.push_back(*v);
      if (auto v = as_double(row["elite"])) elite.push_back(*v);
      if (auto v = as_double(row["mass"])) mass.push_back(*v);
      pairs.push_back(std::move(row));
    }
    if (!snap.alignment.is_null()) {
      summary.push_back({{"snapshot", snap.id},
                         {"pairs", pooled.size()},
                         {"mean_pooled", mean_of(pooled)},
                         {"mean_elite", mean_of(elite)},
                         {"mean_mass", mean_of(mass)}});
    }
  }

  Json alignment = {{"pairs", pairs}, {"summary", summary}};
  if (pairs.empty()) {
    alignment["note"] =
        "no topic pairs to align: each snapshot has fewer than two analysable topics";
  }

  Json deltas = {{"structural", Json::array()}, {"alignment", Json::array()}};
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
    const auto& from = snapshots[i];
    const auto& to = snapshots[i + 1];
    for (const auto& a : structural) {
      if (a["snapshot"] != from.id) continue;
      for (const auto& b : structural) {
        if (b["snapshot"] != to.id || b["topic"] != a["topic"]) continue;
        deltas["structural"].push_back({{"topic", a["topic"]},
                                        {"from", from.id},
                                        {"to", to.id},
                                        {"aei_from", a["aei"]},
                                        {"aei_to", b["aei"]},
                                        {"aei_delta", delta(a["aei"], b["aei"])},
                                        {"explained_fraction_delta",
                                         delta(a["explained_fraction"], b["explained_fraction"])}});
      }
    }
    const Json* sa = nullptr;
    const Json* sb = nullptr;
    for (const auto& s : summary) {
      if (s["snapshot"] == from.id) sa = &s;
      if (s["snapshot"] == to.id) sb = &s;
    }
    if (sa && sb) {
      Json row = {{"from", from.id}, {"to", to.id}};
      for (const char* k : {"mean_mass", "mean_elite", "mean_pooled"}) {
        row[std::string(k) + "_from"] = (*sa)[k];
        row[std::string(k) + "_to"] = (*sb)[k];
        row[std::string(k) + "_delta"] = delta((*sa)[k], (*sb)[k]);
      }
      deltas["alignment"].push_back(std::move(row));
    }
  }
  if (snapshots.size() < 2) notes.push_back("single snapshot: no cross-snapshot deltas");
  if (!failed.empty()) notes.push_back("some topics failed ingest and are absent downstream");

  report["snapshots"] = std::move(ids);
  report["structural"] = std::move(structural);
  report["alignment"] = std::move(alignment);
  report["decomposition"] = std::move(decomposition);
  report["marginal"] = std::move(marginal);
  report["activity"] = std::move(activity);
  report["validation"] = std::move(validation);
  report["cross_year_deltas"] = std::move(deltas);
  report["failed_topics"] = std::move(failed);
  report["notes"] = std::move(notes);
  return report;
}

std::string report_csv(const Json& report) {
  std::ostringstream out;
  write_csv_row(out, {"snapshot", "topic", "k_star", "aei", "aei_null_mean", "explained_fraction",
                      "hat_i_c_A", "hat_i_cp_A", "hat_i_p_A", "hat_i_c_B", "hat_i_cp_B",
                      "hat_i_p_B", "bridge", "share_A", "share_B", "n_A", "n_B", "core_A",
                      "core_B", "marginal_core", "marginal_periphery", "gamma", "toward_core_A",
                      "toward_core_B"});
  auto find = [&](const char* section, const Json& row) -> const Json& {
    for (const auto& r : report.at(section)) {
      if (r.at("snapshot") == row.at("snapshot") && r.at("topic") == row.at("topic")) return r;
    }
    return kNull;
  };
  for (const auto& row : report.at("structural")) {
    const auto& d = find("decomposition", row);
    const auto& m = find("marginal", row);
    const auto& v = find("validation", row);
    const auto& a = find("activity", row);
    const std::vector<std::string> cells = {
        cell(row["snapshot"]),
        cell(row["topic"]),
        cell(row["k_star"]),
        cell(row["aei"]),
        cell(row["aei_null_mean"]),
        cell(row["explained_fraction"]),
        cell(get(d, {"groups", "A", "hat_i_c"})),
        cell(get(d, {"groups", "A", "hat_i_cp"})),
        cell(get(d, {"groups", "A", "hat_i_p"})),
        cell(get(d, {"groups", "B", "hat_i_c"})),
        cell(get(d, {"groups", "B", "hat_i_cp"})),
        cell(get(d, {"groups", "B", "hat_i_p"})),
        cell(get(d, "bridge")),
        cell(get(d, {"groups", "A", "share"})),
        cell(get(d, {"groups", "B", "share"})),
        cell(get(d, {"groups", "A", "size"})),
        cell(get(d, {"groups", "B", "size"})),
        cell(get(d, {"groups", "A", "core_size"})),
        cell(get(d, {"groups", "B", "core_size"})),
        cell(get(m, {"weighted_mean", "core", "formula"})),
        cell(get(m, {"weighted_mean", "periphery", "formula"})),
        cell(get(v, "gamma")),
        cell(get(a, {"toward_core", "A"})),
        cell(get(a, {"toward_core", "B"})),
    };
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out << ',';
      out << csv_field(c);
      first = false;
    }
    out << "\r\n";
  }
  return out.str();
}

const Json& report_schema() {
  static const Json schema = Json::parse(detail::kReportSchema);
  return schema;
}

namespace {

bool has_type(const Json& value, const std::string& type) {
  if (type == "null") return value.is_null();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "string") return value.is_string();
  if (type == "array") return value.is_array();
  if (type == "object") return value.is_object();
  return false;
}

}  // namespace

std::vector<std::string> validate_against(const Json& value, const Json& schema,
                                          const std::string& where) {
  std::vector<std::string> errors;
  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_array()) {
      for (const auto& t : *it) ok = ok || has_type(value, t.get<std::string>());
    } else {
      ok = has_type(value, it->get<std::string>());
    }
    if (!ok) {
      errors.push_back(where + ": expected type " + it->dump() + ", got " + value.type_name());
      return errors;
    }
  }
  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const auto& e : *it) ok = ok || e == value;
    if (!ok) errors.push_back(where + ": value " + value.dump() + " not in " + it->dump());
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (auto it = schema.find("minimum"); it != schema.end() && x < it->get<double>()) {
      errors.push_back(where + ": " + value.dump() + " below minimum " + it->dump());
    }
    if (auto it = schema.find("maximum"); it != schema.end() && x > it->get<double>()) {
      errors.push_back(where + ": " + value.dump() + " above maximum " + it->dump());
    }
  }
  if (value.is_object()) {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& key : *it) {
        if (!value.contains(key.get<std::string>())) {
          errors.push_back(where + ": missing required key '" + key.get<std::string>() + "'");
        }
      }
    }
    if (auto it = schema.find("properties"); it != schema.end()) {
      for (const auto& [key, sub] : it->items()) {
        if (auto v = value.find(key); v != value.end()) {
          auto more = validate_against(*v, sub, where + "." + key);
          errors.insert(errors.end(), more.begin(), more.end());
        }
      }
    }
  }
  if (value.is_array()) {
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        auto more = validate_against(value[i], *it, where + "[" + std::to_string(i) + "]");
        errors.insert(errors.end(), more.begin(), more.end());
      }
    }
  }
  return errors;
}

std::vector<std::string> validate_report(const Json& report) {
  return validate_against(report, report_schema());
}

}  // namespace polardec
