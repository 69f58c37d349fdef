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

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/ingest.hpp"
#include "polardec/types.hpp"

namespace polardec {

enum class Category : std::uint8_t {
  EliteEliteA,
  MassEliteA,
  MassMassA,
  EliteEliteB,
  MassEliteB,
  MassMassB,
  Bridge,
};
inline constexpr std::size_t kCategoryCount = 7;
inline constexpr std::array<Category, kCategoryCount> kCategories{
    Category::EliteEliteA, Category::MassEliteA, Category::MassMassA, Category::EliteEliteB,
    Category::MassEliteB,  Category::MassMassB,  Category::Bridge};

std::string_view to_string(Category c);

/// Category of an interaction between two labelled users; direction does
/// not matter.
Category classify(Group g1, Stratum s1, Group g2, Stratum s2);

/// Unset when either endpoint is not in the network.
std::optional<Category> classify_interaction(const InteractionRecord& record,
                                             const TopicNetwork& network,
                                             const Partition& partition,
                                             const HierarchyLabels& hierarchy);

/// Daily activity per category over the network's window, with a centered
/// moving average (zero outside the window). The unique_* series count only
/// the first interaction of each user pair.
struct ActivitySeries {
  std::string topic;
  std::vector<std::chrono::sys_days> bins;
  std::array<std::vector<std::uint64_t>, kCategoryCount> raw;
  std::array<std::vector<double>, kCategoryCount> smoothed;
  std::array<std::vector<std::uint64_t>, kCategoryCount> unique_raw;
  std::array<std::vector<double>, kCategoryCount> unique_smoothed;
  std::size_t classified = 0;
  std::size_t unclassifiable = 0;
  std::size_t outside_window = 0;
  int smoothing_days = 7;
};

/// Throws InputError when there are no records.
ActivitySeries activity_series(std::span<const InteractionRecord> records,
                               const TopicNetwork& network, const Partition& partition,
                               const HierarchyLabels& hierarchy, int smoothing_days = 7);

/// Centered moving sum divided by the width; out-of-range days count as 0.
std::vector<double> centered_moving_average(std::span<const std::uint64_t> series, int width);

/// Per group, the fraction of within-group core-periphery interactions whose
/// endorsed user (target) is the core member.
struct Amplification {
  std::array<std::optional<double>, 2> toward_core;
  std::array<std::uint64_t, 2> toward{0, 0};
  std::array<std::uint64_t, 2> total{0, 0};
};

Amplification amplification_direction(std::span<const InteractionRecord> records,
                                      const TopicNetwork& network, const Partition& partition,
                                      const HierarchyLabels& hierarchy);

}  // namespace polardec
