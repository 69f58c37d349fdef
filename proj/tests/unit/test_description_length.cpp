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

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "polardec/description_length.hpp"

using namespace polardec;

namespace {

// log n! by direct summation, independent of lgamma.
double log_factorial(std::uint64_t n) {
  double s = 0.0;
  for (std::uint64_t i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
  return s;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double pairs(std::uint64_t n) { return static_cast<double>(n * (n - 1) / 2); }

}  // namespace

TEST_CASE("log_binomial against summed log-factorials") {
  for (std::uint64_t n : {1u, 5u, 17u, 190u, 1000u}) {
    for (std::uint64_t k = 0; k <= n; k += 1 + n / 7) {
      CHECK(log_binomial(static_cast<double>(n), static_cast<double>(k)) ==
            doctest::Approx(log_choose(n, k)).epsilon(1e-11));
    }
  }
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)));
  CHECK_THROWS_AS(log_binomial(3, 4), std::domain_error);
}

TEST_CASE("one-block encoding") {
  // K_4: 6 pairs, 6 edges; only the edge-count term remains.
  CHECK(er_description_length(4, 6) == doctest::Approx(std::log(7.0)));
  CHECK(er_description_length(20, 37) ==
        doctest::Approx(std::log(191.0) + log_choose(190, 37)).epsilon(1e-11));
}

TEST_CASE("two-block partition cost") {
  // log(N - 1) + log(N! / (n0! n1!)).
  CHECK(two_block_partition_dl(3, 2) == doctest::Approx(std::log(4.0) + std::log(10.0)));
  CHECK(two_block_partition_dl(10, 10) ==
        doctest::Approx(std::log(19.0) + log_choose(20, 10)).epsilon(1e-11));
}

TEST_CASE("planted-partition encoding matches the term-by-term sum") {
  PlantedCounts c{12, 8, 40, 5};
  const double in = pairs(12) + pairs(8);
  const double out = 96.0;
  const double expected = std::log(19.0) + log_choose(20, 8) + std::log(in + 1) +
                          std::log(out + 1) + log_choose(94, 40) + log_choose(96, 5);
  CHECK(planted_partition_dl(c) == doctest::Approx(expected).epsilon(1e-11));
  CHECK_THROWS_AS(planted_partition_dl(PlantedCounts{0, 5, 1, 0}), std::domain_error);
}

TEST_CASE("assortativity compares densities exactly") {
  // Within pairs 45 + 45 = 90, between 100. 9/90 vs 10/100 is a tie.
  CHECK_FALSE(assortative(PlantedCounts{10, 10, 9, 10}));
  CHECK(assortative(PlantedCounts{10, 10, 10, 10}));
  CHECK_FALSE(assortative(PlantedCounts{10, 10, 0, 1}));
  CHECK_FALSE(assortative(PlantedCounts{1, 1, 0, 1}));  // no within pairs
}

TEST_CASE("core-periphery encoding") {
  CorePeripheryCounts c{5, 10, 10, 10, 0};
  CHECK(c.pairs_cc() == 10);
  CHECK(c.pairs_cp() == 50);
  CHECK(c.pairs_pp() == 45);
  const double expected = std::log(14.0) + log_choose(15, 5) + std::log(11.0) +
                          std::log(51.0) + log_choose(50, 10) + std::log(46.0);
  CHECK(core_periphery_dl(c) == doctest::Approx(expected).epsilon(1e-11));
  CHECK_THROWS_AS(core_periphery_dl(CorePeripheryCounts{0, 3, 0, 0, 1}), std::domain_error);
}

TEST_CASE("hub-and-spoke ordering") {
  CHECK(hub_spoke_ordered({5, 10, 10, 10, 0}));
  CHECK(hub_spoke_ordered({5, 10, 2, 10, 9}));    // 0.2 = 0.2 = 0.2
  CHECK_FALSE(hub_spoke_ordered({5, 10, 1, 10, 0}));  // cc 0.1 < cp 0.2
  CHECK_FALSE(hub_spoke_ordered({5, 10, 10, 1, 9}));  // cp 0.02 < pp 0.2
  // A single-node core has no core-core pairs; only cp >= pp is checked.
  CHECK(hub_spoke_ordered({1, 4, 0, 4, 0}));
}
