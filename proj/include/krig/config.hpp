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
#include <string_view>

#include "krig/session.hpp"

namespace krig {

/// Parse a model configuration written as `Key.Path = value` lines, with the
/// same field names as the KOptions structure (an optional `KOptions.`
/// prefix and trailing `;` are accepted). Values are numbers, simple
/// expressions in pi, booleans, names, or matrices in `[a b; c d]` form.
/// ExpDesign.X / ExpDesign.Y may also name CSV files relative to `base_dir`.
ModelConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                         std::string_view source = "<config>");
ModelConfig load_config(const std::filesystem::path& path);

/// Evaluate a scalar like `5*pi/6` or `-1.5e-3`.
double parse_scalar(std::string_view text);

}  // namespace krig
