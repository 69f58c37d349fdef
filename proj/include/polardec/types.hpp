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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polardec {

/// Bad or missing input. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data does not support the requested analysis (e.g. no assortative
/// two-group structure). Maps to CLI exit code 2.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Group : std::uint8_t { A = 0, B = 1 };
enum class Stratum : std::uint8_t { Core = 0, Periphery = 1 };
enum class Leaning : std::uint8_t { Left = 0, Right = 1, Other = 2 };

constexpr std::size_t index(Group g) { return static_cast<std::size_t>(g); }
constexpr std::size_t index(Stratum s) { return static_cast<std::size_t>(s); }
constexpr Group other(Group g) { return g == Group::A ? Group::B : Group::A; }

inline std::string_view to_string(Group g) { return g == Group::A ? "A" : "B"; }
inline std::string_view to_string(Stratum s) {
  return s == Stratum::Core ? "core" : "periphery";
}
inline std::string_view to_string(Leaning l) {
  switch (l) {
    case Leaning::Left: return "left";
    case Leaning::Right: return "right";
    default: return "other";
  }
}

Group parse_group(std::string_view s);
Stratum parse_stratum(std::string_view s);
Leaning parse_leaning(std::string_view s);

}  // namespace polardec
