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

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace polardec {

using Json = nlohmann::json;

/// Number rounded to 12 significant digits; non-finite values become null.
Json number(double x);
Json number(std::optional<double> x);

/// UTF-8 JSON with sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view s);
void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields);
/// "%.12g" formatting for CSV cells; empty string for non-finite values.
std::string format_number(double x);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace polardec
