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
#include "polardec/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "polardec/parallel.hpp"
#include "polardec/random.hpp"

namespace polardec {
namespace {

constexpr std::uint64_t kBootstrapStream = 0x626f6f74ULL;

// Sums in ascending order so the result depends only on the multiset.
double ordered_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double entropy(std::vector<std::uint64_t> counts, double n) {
  std::sort(counts.begin(), counts.end());
  std::vector<double> terms;
  terms.reserve(counts.size());
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    terms.push_back(-p * std::log(p));
  }
  return ordered_sum(std::move(terms));
}

std::vector<std::uint64_t> class_sizes(std::span<const int> x) {
  std::map<int, std::uint64_t> counts;
  for (int v : x) ++counts[v];
  std::vector<std::uint64_t> out;
  for (auto [label, c] : counts) out.push_back(c);
  return out;
}

// Expected-MI contribution of one (row, column) class pair; symmetric in a, b.
double emi_cell(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  if (a > b) std::swap(a, b);
  const double N = static_cast<double>(n);
  const double A = static_cast<double>(a), B = static_cast<double>(b);
  const double fixed = std::lgamma(A + 1) + std::lgamma(B + 1) + std::lgamma(N - A + 1) +
                       std::lgamma(N - B + 1) - std::lgamma(N + 1);
  const std::uint64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(a + b) -
                                                         static_cast<std::int64_t>(n));
  double sum = 0.0;
  for (std::uint64_t k = lo; k <= a; ++k) {
    const double K = static_cast<double>(k);
    const double log_p = fixed - std::lgamma(K + 1) - std::lgamma(A - K + 1) -
                         std::lgamma(B - K + 1) - std::lgamma(N - A - B + K + 1);
    sum += K / N * std::log(N * K / (A * B)) * std::exp(log_p);
  }
  return sum;
}

}  // namespace

double expected_mutual_information(std::span<const std::uint64_t> a,
                                   std::span<const std::uint64_t> b) {
  const std::uint64_t n = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::vector<double> terms;
  terms.reserve(a.size() * b.size());
  for (auto ai : a) {
    for (auto bj : b) terms.push_back(emi_cell(ai, bj, n));
  }
  return ordered_sum(std::move(terms));
}

NmiValue nmi_detail(std::span<const int> x, std::span<const int> y, bool adjusted) {
  if (x.size() != y.size()) throw std::invalid_argument("nmi: label vectors differ in length");
  if (x.size() < 2) throw std::invalid_argument("nmi: need at least two labels");
  const double n = static_cast<double>(x.size());
  auto a = class_sizes(x);
  auto b = class_sizes(y);
  if (a.size() < 2 || b.size() < 2) return {};

  std::map<std::pair<int, int>, std::uint64_t> joint;
  for (std::size_t i = 0; i < x.size(); ++i) ++joint[{x[i], y[i]}];
  std::vector<std::uint64_t> cells;
  cells.reserve(joint.size());
  for (auto [k, c] : joint) cells.push_back(c);

  const double hx = entropy(a, n), hy = entropy(b, n);
  const double mi = hx + hy - entropy(cells, n);
  const double mean_h = (hx + hy) / 2;
  NmiValue out;
  if (!adjusted) {
    out.raw = mi / mean_h;
    out.value = std::clamp(out.raw, 0.0, 1.0);
    return out;
  }
  const double emi = expected_mutual_information(a, b);
  const double denom = mean_h - emi;
  if (denom <= 0.0) return {};
  out.raw = (mi - emi) / denom;
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

double nmi(std::span<const int> x, std::span<const int> y, bool adjusted) {
  return nmi_detail(x, y, adjusted).value;
}

TopicStances topic_stances(std::span<const std::string> nodes, const Partition& partition,
                           const HierarchyLabels& hierarchy) {
  if (partition.group_of.size() != nodes.size() || hierarchy.stratum.size() != nodes.size()) {
    throw std::invalid_argument("partition/hierarchy do not match the node list");
  }
  TopicStances t;
  t.nodes.assign(nodes.begin(), nodes.end());
  t.group = partition.group_of;
  t.prob_a = partition.prob_a;
  t.stratum = hierarchy.stratum;
  t.prob_core = hierarchy.prob_core;
  t.left_group = partition.left_group;
  t.assortative = partition.assortative;
  return t;
}

int StanceVectors::label1(Group g) const {
  return oriented ? (g == *left_group[0] ? 0 : 1) : static_cast<int>(index(g));
}

int StanceVectors::label2(Group g) const {
  return oriented ? (g == *left_group[1] ? 0 : 1) : static_cast<int>(index(g));
}

StanceVectors stance_vectors(const TopicStances& first, const TopicStances& second,
                             std::size_t min_overlap) {
  if (!first.assortative || !second.assortative) {
    throw RefusalError("alignment refused: a topic has no assortative two-group split");
  }
  StanceVectors v;
  v.left_group = {first.left_group, second.left_group};
  v.oriented = first.left_group.has_value() && second.left_group.has_value();
  if (!v.oriented) {
    v.warnings.push_back("groups not oriented left/right; using raw A/B labels (NMI is "
                         "invariant to label permutation)");
  }
  std::size_t i = 0, j = 0;
  while (i < first.nodes.size() && j < second.nodes.size()) {
    const int cmp = first.nodes[i].compare(second.nodes[j]);
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      v.users.push_back(first.nodes[i]);
      v.s1.push_back(v.label1(first.group[i]));
      v.s2.push_back(v.label2(second.group[j]));
      v.strata1.push_back(first.stratum[i]);
      v.strata2.push_back(second.stratum[j]);
      v.prob_a1.push_back(first.prob_a[i]);
      v.prob_a2.push_back(second.prob_a[j]);
      v.prob_core1.push_back(first.prob_core[i]);
      v.prob_core2.push_back(second.prob_core[j]);
      ++i;
      ++j;
    }
  }
  if (v.users.size() < min_overlap || v.users.size() < 2) {
    throw InputError("insufficient overlap: " + std::to_string(v.users.size()) +
                     " shared users (minimum " + std::to_string(min_overlap) + ")");
  }
  return v;
}

AlignmentResult alignment_by_hierarchy(const StanceVectors& v, std::size_t min_overlap) {
  AlignmentResult r;
  std::vector<int> e1, e2, m1, m2;
  for (std::size_t i = 0; i < v.users.size(); ++i) {
    if (v.strata1[i] != v.strata2[i]) {
      ++r.mixed;
    } else if (v.strata1[i] == Stratum::Core) {
      e1.push_back(v.s1[i]);
      e2.push_back(v.s2[i]);
    } else {
      m1.push_back(v.s1[i]);
      m2.push_back(v.s2[i]);
    }
  }
  auto fill = [](StratumAlignment& out, const std::vector<int>& x, const std::vector<int>& y) {
    out.users = x.size();
    out.plain = nmi_detail(x, y, false);
    out.adjusted = nmi_detail(x, y, true);
  };
  const std::size_t minimum = std::max<std::size_t>(min_overlap, 2);
  if (e1.size() < minimum || m1.size() < minimum) {
    throw InputError("insufficient overlap: " + std::to_string(e1.size()) + " shared elites, " +
                     std::to_string(m1.size()) + " shared masses (minimum " +
                     std::to_string(minimum) + ")");
  }
  fill(r.elite, e1, e2);
  fill(r.mass, m1, m2);
  fill(r.pooled, v.s1, v.s2);
  return r;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapResult bootstrap_alignment(const StanceVectors& v, std::size_t samples,
                                    std::uint64_t seed, bool adjusted, unsigned jobs) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> elite(samples, kSkip), mass(samples, kSkip);
  parallel_for(samples, jobs, [&](std::size_t s) {
    Rng rng = make_rng(seed, {kBootstrapStream, s});
    std::vector<int> e1, e2, m1, m2;
    for (std::size_t i = 0; i < v.users.size(); ++i) {
      const Group g1 = uniform01(rng) < v.prob_a1[i] ? Group::A : Group::B;
      const bool c1 = uniform01(rng) < v.prob_core1[i];
      const Group g2 = uniform01(rng) < v.prob_a2[i] ? Group::A : Group::B;
      const bool c2 = uniform01(rng) < v.prob_core2[i];
      if (c1 != c2) continue;
      auto& x = c1 ? e1 : m1;
      auto& y = c1 ? e2 : m2;
      x.push_back(v.label1(g1));
      y.push_back(v.label2(g2));
    }
    if (e1.size() >= 2) elite[s] = nmi(e1, e2, adjusted);
    if (m1.size() >= 2) mass[s] = nmi(m1, m2, adjusted);
  });
  auto summarize = [](const std::vector<double>& all) {
    BootstrapSummary out;
    std::vector<double> kept;
    for (double x : all) {
      if (std::isnan(x)) {
        ++out.skipped;
      } else {
        kept.push_back(x);
      }
    }
    out.samples = kept.size();
    if (kept.empty()) {
      out.mean = kSkip;
    } else {
      // Offsetting by the first value keeps a constant sample exact.
      double shift = 0.0;
      for (double x : kept) shift += x - kept.front();
      out.mean = kept.front() + shift / static_cast<double>(kept.size());
    }
    out.lower = percentile(kept, 0.025);
    out.upper = percentile(kept, 0.975);
    return out;
  };
  return {summarize(elite), summarize(mass)};
}

}  // namespace polardec
