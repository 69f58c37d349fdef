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
#include "polardec/description_length.hpp"

#include <cmath>
#include <stdexcept>

#include "polardec/graph.hpp"

namespace polardec {

double log_binomial(double n, double k) {
  if (k < 0 || k > n) throw std::domain_error("log_binomial: k outside [0, n]");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double er_description_length(std::uint64_t num_nodes, std::uint64_t num_edges) {
  const double pairs = static_cast<double>(pair_count(num_nodes));
  return std::log(pairs + 1) + log_binomial(pairs, static_cast<double>(num_edges));
}

double two_block_partition_dl(std::uint64_t n0, std::uint64_t n1) {
  const double n = static_cast<double>(n0 + n1);
  return std::log(n - 1) + std::lgamma(n + 1) - std::lgamma(static_cast<double>(n0) + 1) -
         std::lgamma(static_cast<double>(n1) + 1);
}

double planted_partition_dl(const PlantedCounts& c) {
  if (c.n0 == 0 || c.n1 == 0) throw std::domain_error("planted partition needs two non-empty blocks");
  const double in = static_cast<double>(pair_count(c.n0) + pair_count(c.n1));
  const double out = static_cast<double>(c.n0 * c.n1);
  return two_block_partition_dl(c.n0, c.n1) + std::log(in + 1) + std::log(out + 1) +
         log_binomial(in, static_cast<double>(c.e_in)) +
         log_binomial(out, static_cast<double>(c.e_out));
}

bool assortative(const PlantedCounts& c) {
  using Wide = unsigned __int128;
  const Wide in = pair_count(c.n0) + pair_count(c.n1);
  const Wide out = static_cast<Wide>(c.n0) * c.n1;
  if (in == 0 || out == 0) return false;
  return static_cast<Wide>(c.e_in) * out > static_cast<Wide>(c.e_out) * in;
}

std::uint64_t CorePeripheryCounts::pairs_cc() const { return pair_count(n_core); }
std::uint64_t CorePeripheryCounts::pairs_pp() const { return pair_count(n_periphery); }

double core_periphery_dl(const CorePeripheryCounts& c) {
  if (c.n_core == 0 || c.n_periphery == 0) {
    throw std::domain_error("core-periphery split needs non-empty core and periphery");
  }
  double dl = two_block_partition_dl(c.n_core, c.n_periphery);
  for (auto [pairs, edges] : {std::pair{c.pairs_cc(), c.e_cc}, std::pair{c.pairs_cp(), c.e_cp},
                              std::pair{c.pairs_pp(), c.e_pp}}) {
    const double p = static_cast<double>(pairs);
    dl += std::log(p + 1) + log_binomial(p, static_cast<double>(edges));
  }
  return dl;
}

namespace {

// a_edges / a_pairs >= b_edges / b_pairs, vacuous if either has no pairs.
bool denser_or_equal(std::uint64_t a_edges, std::uint64_t a_pairs, std::uint64_t b_edges,
                     std::uint64_t b_pairs) {
  if (a_pairs == 0 || b_pairs == 0) return true;
  return static_cast<unsigned __int128>(a_edges) * b_pairs >=
         static_cast<unsigned __int128>(b_edges) * a_pairs;
}

}  // namespace

bool hub_spoke_ordered(const CorePeripheryCounts& c) {
  return denser_or_equal(c.e_cc, c.pairs_cc(), c.e_cp, c.pairs_cp()) &&
         denser_or_equal(c.e_cp, c.pairs_cp(), c.e_pp, c.pairs_pp()) &&
         denser_or_equal(c.e_cc, c.pairs_cc(), c.e_pp, c.pairs_pp());
}

}  // namespace polardec
