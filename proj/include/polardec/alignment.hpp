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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polardec/blockmodel.hpp"
#include "polardec/hierarchy.hpp"
#include "polardec/types.hpp"

namespace polardec {

struct NmiValue {
  double value = 0.0;  // floored at 0 (and capped at 1 for the plain variant)
  double raw = 0.0;
};

/// Normalized mutual information with natural logs and arithmetic-mean
/// normalization. The adjusted variant subtracts the exact expected mutual
/// information under the permutation model. A constant vector on either
/// side gives 0. Results are exactly symmetric and invariant to relabeling
/// classes. Throws std::invalid_argument on length mismatch or n < 2.
NmiValue nmi_detail(std::span<const int> x, std::span<const int> y, bool adjusted);
double nmi(std::span<const int> x, std::span<const int> y, bool adjusted);

/// Expected mutual information of two clusterings with the given class
/// sizes under random permutation (hypergeometric model).
double expected_mutual_information(std::span<const std::uint64_t> a,
                                   std::span<const std::uint64_t> b);

/// Group and hierarchy assignment of one topic network, keyed by user.
struct TopicStances {
  std::vector<std::string> nodes;  // sorted
  std::vector<Group> group;
  std::vector<double> prob_a;
  std::vector<Stratum> stratum;
  std::vector<double> prob_core;
  std::optional<Group> left_group;
  bool assortative = true;
};

TopicStances topic_stances(std::span<const std::string> nodes, const Partition& partition,
                           const HierarchyLabels& hierarchy);

/// Stances of the users present in both topics. Labels are 0 = left,
/// 1 = right when both topics are oriented, else 0 = A, 1 = B.
struct StanceVectors {
  std::vector<std::string> users;
  std::vector<int> s1;
  std::vector<int> s2;
  std::vector<Stratum> strata1;
  std::vector<Stratum> strata2;
  std::vector<double> prob_a1;
  std::vector<double> prob_a2;
  std::vector<double> prob_core1;
  std::vector<double> prob_core2;
  std::array<std::optional<Group>, 2> left_group;
  bool oriented = false;
  std::vector<std::string> warnings;

  int label1(Group g) const;
  int label2(Group g) const;
};

/// Throws RefusalError if a topic is not assortative and
/// InputError("insufficient overlap ...") below `min_overlap` shared users.
StanceVectors stance_vectors(const TopicStances& first, const TopicStances& second,
                             std::size_t min_overlap = 10);

struct StratumAlignment {
  NmiValue plain;
  NmiValue adjusted;
  std::size_t users = 0;

  double value(bool use_adjusted) const { return (use_adjusted ? adjusted : plain).value; }
};

struct AlignmentResult {
  StratumAlignment elite;   // core in both topics
  StratumAlignment mass;    // periphery in both topics
  StratumAlignment pooled;  // all shared users
  std::size_t mixed = 0;    // core in one topic, periphery in the other
};

/// Point estimates per hierarchy. Users whose stratum differs between the
/// topics are excluded from both strata. Throws InputError if a stratum
/// has fewer than `min_overlap` users.
AlignmentResult alignment_by_hierarchy(const StanceVectors& vectors,
                                       std::size_t min_overlap = 10);

struct BootstrapSummary {
  double mean = 0.0;
  double lower = 0.0;  // 2.5th percentile
  double upper = 0.0;  // 97.5th percentile
  std::size_t samples = 0;
  std::size_t skipped = 0;
};

struct BootstrapResult {
  BootstrapSummary elite;
  BootstrapSummary mass;
};

/// Redraws each shared user's group (by prob_a) and stratum (by prob_core)
/// per topic and recomputes the stratum NMIs. Samples whose stratum has
/// fewer than two users are skipped for that stratum. Identical for any
/// `jobs`.
BootstrapResult bootstrap_alignment(const StanceVectors& vectors, std::size_t samples,
                                    std::uint64_t seed, bool adjusted = true, unsigned jobs = 1);

/// Linear-interpolation percentile of an unsorted sample, q in [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace polardec
