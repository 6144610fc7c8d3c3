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

#include <string>
#include <string_view>

#include "krig/session.hpp"

namespace krig {

/// Self-describing JSON model file. Custom kernels and trends are stored by
/// registered name and must be registered again before loading.
std::string serialize_model(const KrigingModel& model);
KrigingModel deserialize_model(std::string_view text);

}  // namespace krig
