/*
 * Copyright 2026 The krig Authors
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
#include <string>
#include <string_view>
#include <vector>

#include "krig/numeric.hpp"

namespace krig {

/// Comma-separated numeric table. A first row that does not parse as
/// numbers is taken as the header.
struct CsvTable {
  std::vector<std::string> header;
  MatrixXd data;
};

CsvTable parse_csv(std::string_view text, std::string_view source = "<input>");
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double value);
std::string format_csv(const MatrixXd& data, const std::vector<std::string>& header = {});

std::string read_text(const std::filesystem::path& path);
/// Write to a sibling temporary and rename over the target.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace krig
