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

#include <stdexcept>
#include <string>
#include <string_view>

namespace krig {

enum class ErrorCode {
  DimensionMismatch,
  DomainError,
  NotPositiveDefinite,
  NonFinite,
  ThetaLengthMismatch,
  CustomKernelShape,
  CustomFShape,
  RankDeficient,
  ParentModelUnfitted,
  NumericalBreakdown,
  DivisionByZero,
  ZeroVariance,
  DuplicatePoints,
  Config,
  Data,
};

/// Coarse error class used by the command line front end to pick an exit code.
enum class ErrorCategory { Config, Data, Numerical };

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace krig
