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
#include "polardec/activity.hpp"

#include <algorithm>
#include <set>

namespace polardec {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::EliteEliteA: return "elite-elite_A";
    case Category::MassEliteA: return "mass-elite_A";
    case Category::MassMassA: return "mass-mass_A";
    case Category::EliteEliteB: return "elite-elite_B";
    case Category::MassEliteB: return "mass-elite_B";
    case Category::MassMassB: return "mass-mass_B";
    case Category::Bridge: return "bridge";
  }
  return "unknown";
}

Category classify(Group g1, Stratum s1, Group g2, Stratum s2) {
  if (g1 != g2) return Category::Bridge;
  const std::size_t base = g1 == Group::A ? 0 : 3;
  std::size_t offset = 1;
  if (s1 == s2) offset = s1 == Stratum::Core ? 0 : 2;
  return kCategories[base + offset];
}

std::optional<Category> classify_interaction(const InteractionRecord& record,
                                             const TopicNetwork& network,
                                             const Partition& partition,
                                             const HierarchyLabels& hierarchy) {
  auto s = network.find(record.source);
  auto t = network.find(record.target);
  if (!s || !t) return std::nullopt;
  return classify(partition.group_of[*s], hierarchy.stratum[*s], partition.group_of[*t],
                  hierarchy.stratum[*t]);
}

std::vector<double> centered_moving_average(std::span<const std::uint64_t> series, int width) {
  if (width < 1) width = 1;
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  const std::ptrdiff_t left = (width - 1) / 2, right = width - 1 - left;
  std::vector<double> out(series.size(), 0.0);
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    std::uint64_t sum = 0;
    for (std::ptrdiff_t d = t - left; d <= t + right; ++d) {
      if (d >= 0 && d < n) sum += series[static_cast<std::size_t>(d)];
    }
    out[static_cast<std::size_t>(t)] = static_cast<double>(sum) / width;
  }
  return out;
}

ActivitySeries activity_series(std::span<const InteractionRecord> records,
                               const TopicNetwork& network, const Partition& partition,
                               const HierarchyLabels& hierarchy, int smoothing_days) {
  using namespace std::chrono;
  if (records.empty()) throw InputError("empty window: no interactions for " + network.topic);
  ActivitySeries a;
  a.topic = network.topic;
  a.smoothing_days = smoothing_days;
  const sys_days first = floor<days>(network.window.start);
  const sys_days last = floor<days>(network.window.end);
  for (sys_days d = first; d <= last; d += days{1}) a.bins.push_back(d);
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    a.raw[c].assign(a.bins.size(), 0);
    a.unique_raw[c].assign(a.bins.size(), 0);
  }

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return records[x].timestamp < records[y].timestamp;
  });
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i : order) {
    const auto& r = records[i];
    if (!network.window.contains(r.timestamp)) {
      ++a.outside_window;
      continue;
    }
    auto category = classify_interaction(r, network, partition, hierarchy);
    if (!category) {
      ++a.unclassifiable;
      continue;
    }
    ++a.classified;
    const auto bin = static_cast<std::size_t>((floor<days>(r.timestamp) - first).count());
    const auto c = static_cast<std::size_t>(*category);
    ++a.raw[c][bin];
    if (r.source != r.target) {
      auto key = std::minmax(r.source, r.target);
      if (seen.emplace(key.first, key.second).second) ++a.unique_raw[c][bin];
    }
  }
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    a.smoothed[c] = centered_moving_average(a.raw[c], smoothing_days);
    a.unique_smoothed[c] = centered_moving_average(a.unique_raw[c], smoothing_days);
  }
  return a;
}

Amplification amplification_direction(std::span<const InteractionRecord> records,
                                      const TopicNetwork& network, const Partition& partition,
                                      const HierarchyLabels& hierarchy) {
  Amplification out;
  for (const auto& r : records) {
    auto s = network.find(r.source);
    auto t = network.find(r.target);
    if (!s || !t) continue;
    const Group g = partition.group_of[*s];
    if (partition.group_of[*t] != g) continue;
    if (hierarchy.stratum[*s] == hierarchy.stratum[*t]) continue;
    ++out.total[index(g)];
    out.toward[index(g)] += hierarchy.stratum[*t] == Stratum::Core;
  }
  for (std::size_t g = 0; g < 2; ++g) {
    if (out.total[g] > 0) {
      out.toward_core[g] =
          static_cast<double>(out.toward[g]) / static_cast<double>(out.total[g]);
    }
  }
  return out;
}

}  // namespace polardec
