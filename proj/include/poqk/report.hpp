// Copyright 2026 The poqklab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace poqk::report {

inline constexpr const char* kVersionTag = "poqklab 0.1.0";

/// One report: fixed column names and string-rendered rows. Deterministic for
/// a fixed config and seed; the timestamp lives outside the comparable body.
struct Report {
  nlohmann::ordered_json config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// CSV with `# version`, `# config` and `# timestamp` comment lines; the
  /// timestamp line is the only non-reproducible byte range.
  std::string to_csv(const std::string& timestamp) const;
  nlohmann::ordered_json to_json(const std::string& timestamp) const;

  static Report from_json(const nlohmann::ordered_json& j);

  /// Row-for-row equality of the reproducible body (columns + rows + config).
  bool body_equals(const Report& other) const;
};

/// Fixed-format float rendering shared by every writer (%.12g).
std::string fmt(double v);
std::string now_timestamp();

}  // namespace poqk::report
