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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "polardec/activity.hpp"
#include "polardec/blockmodel.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/ingest.hpp"
#include "polardec/types.hpp"

using namespace polardec;
using namespace std::chrono;

namespace {

TimePoint day_at(int offset, int hour = 12) {
  return sys_days{2023y / January / 1} + days{offset} + hours{hour};
}

InteractionRecord rec(std::string s, std::string t, int offset) {
  return {std::move(s), std::move(t), day_at(offset), {"x"}};
}

// Users a1 (A core), a2 a3 (A periphery), b1 (B core), b2 (B periphery).
struct Fixture {
  std::vector<InteractionRecord> records;
  TopicNetwork network;
  Partition partition;
  HierarchyLabels hierarchy;

  Fixture() {
    records = {rec("a2", "a1", 0), rec("a3", "a1", 0), rec("a1", "a2", 1), rec("a2", "a3", 1),
               rec("b2", "b1", 2), rec("a3", "b2", 3), rec("a2", "a1", 3), rec("b1", "a1", 4)};
    BuildOptions options;
    options.min_nodes = 2;
    options.window = TimeWindow{day_at(0, 0), day_at(4, 23)};
    network = build_topic_network(records, "x", options);
    // nodes sorted: a1 a2 a3 b1 b2
    partition.group_of = {Group::A, Group::A, Group::A, Group::B, Group::B};
    partition.prob_a = {1, 1, 1, 0, 0};
    partition.assortative = true;
    const auto C = Stratum::Core;
    const auto P = Stratum::Periphery;
    hierarchy.stratum = {C, P, P, C, P};
    hierarchy.prob_core = {1, 0, 0, 1, 0};
  }
};

}  // namespace

TEST_CASE("classification ignores direction") {
  const auto C = Stratum::Core;
  const auto P = Stratum::Periphery;
  CHECK(classify(Group::A, C, Group::A, C) == Category::EliteEliteA);
  CHECK(classify(Group::A, P, Group::A, C) == Category::MassEliteA);
  CHECK(classify(Group::A, C, Group::A, P) == Category::MassEliteA);
  CHECK(classify(Group::B, P, Group::B, P) == Category::MassMassB);
  CHECK(classify(Group::B, C, Group::B, P) == Category::MassEliteB);
  CHECK(classify(Group::A, C, Group::B, C) == Category::Bridge);
  CHECK(to_string(Category::MassEliteB) == "mass-elite_B");
}

TEST_CASE("moving average is centered and zero-padded") {
  std::vector<std::uint64_t> s{3, 0, 0, 6, 0};
  auto m = centered_moving_average(s, 3);
  CHECK(m == std::vector<double>{1.0, 1.0, 2.0, 2.0, 2.0});
  // An even width leans right: window [t - 1, t + 2].
  auto e = centered_moving_average(s, 4);
  CHECK(e == std::vector<double>{0.75, 2.25, 1.5, 1.5, 1.5});
  CHECK(centered_moving_average(s, 1) == std::vector<double>{3, 0, 0, 6, 0});
}

TEST_CASE("daily series per category") {
  Fixture f;
  ActivitySeries a = activity_series(f.records, f.network, f.partition, f.hierarchy, 3);
  REQUIRE(a.bins.size() == 5);
  CHECK(a.classified == 8);
  CHECK(a.outside_window == 0);
  const auto me_a = static_cast<std::size_t>(Category::MassEliteA);
  const auto mm_a = static_cast<std::size_t>(Category::MassMassA);
  const auto bridge = static_cast<std::size_t>(Category::Bridge);
  CHECK(a.raw[me_a] == std::vector<std::uint64_t>{2, 1, 0, 1, 0});
  CHECK(a.raw[mm_a] == std::vector<std::uint64_t>{0, 1, 0, 0, 0});
  CHECK(a.raw[bridge] == std::vector<std::uint64_t>{0, 0, 0, 1, 1});
  // a1-a2 repeats on days 1 and 3; only the first counts as unique.
  CHECK(a.unique_raw[me_a] == std::vector<std::uint64_t>{2, 0, 0, 0, 0});
  CHECK(a.smoothed[me_a][0] == doctest::Approx(1.0));
  CHECK(a.smoothed[bridge][4] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("records outside the window or network are counted apart") {
  Fixture f;
  auto records = f.records;
  records.push_back(rec("a1", "a2", 9));
  records.push_back(rec("zz", "a2", 2));
  ActivitySeries a = activity_series(records, f.network, f.partition, f.hierarchy, 7);
  CHECK(a.outside_window == 1);
  CHECK(a.unclassifiable == 1);
  CHECK_THROWS_AS(activity_series({}, f.network, f.partition, f.hierarchy, 7), InputError);
}

TEST_CASE("amplification counts endorsements of the core") {
  Fixture f;
  Amplification amp = amplification_direction(f.records, f.network, f.partition, f.hierarchy);
  // Group A core-periphery records: a2->a1, a3->a1, a1->a2, a2->a1.
  CHECK(amp.total[0] == 4);
  CHECK(amp.toward[0] == 3);
  CHECK(*amp.toward_core[0] == doctest::Approx(0.75));
  CHECK(amp.total[1] == 1);
  CHECK(*amp.toward_core[1] == 1.0);

  std::vector<InteractionRecord> none{rec("a2", "a3", 0)};
  CHECK_FALSE(amplification_direction(none, f.network, f.partition, f.hierarchy)
                  .toward_core[0]
                  .has_value());
}

TEST_CASE("a planted burst peaks within the smoothing half-width") {
  Fixture f;
  std::vector<InteractionRecord> records;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"a2", "a1"}, {"a3", "a1"}, {"b2", "b1"}, {"a3", "b2"}, {"b1", "a1"}};
  TopicNetwork network = f.network;
  network.window = TimeWindow{day_at(0, 0), day_at(59, 23)};
  for (int day = 0; day < 60; ++day) {
    const auto& p = pairs[static_cast<std::size_t>(day) % pairs.size()];
    records.push_back(rec(p.first, p.second, day));
  }
  const int burst_day = 37;
  for (int k = 0; k < 30; ++k) {
    const auto& p = pairs[static_cast<std::size_t>(k) % pairs.size()];
    records.push_back(rec(p.first, p.second, burst_day + (k % 3) - 1));
  }
  ActivitySeries a = activity_series(records, network, f.partition, f.hierarchy, 7);
  std::vector<double> total(a.bins.size(), 0.0);
  for (const auto& series : a.smoothed) {
    for (std::size_t d = 0; d < total.size(); ++d) total[d] += series[d];
  }
  const auto peak = std::max_element(total.begin(), total.end()) - total.begin();
  CHECK(std::abs(peak - burst_day) <= 3);
}
