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

#include "poqk/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace poqk::report {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string now_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[40];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

std::string Report::to_csv(const std::string& timestamp) const {
  std::ostringstream os;
  os << "# version: " << kVersionTag << "\n";
  os << "# config: " << config.dump() << "\n";
  os << "# timestamp: " << timestamp << "\n";
  for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json Report::to_json(const std::string& timestamp) const {
  nlohmann::ordered_json j;
  j["version"] = kVersionTag;
  j["timestamp"] = timestamp;
  j["config"] = config;
  j["columns"] = columns;
  j["rows"] = rows;
  return j;
}

Report Report::from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.config = j.at("config");
  r.columns = j.at("columns").get<std::vector<std::string>>();
  r.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  return r;
}

bool Report::body_equals(const Report& other) const {
  return config == other.config && columns == other.columns && rows == other.rows;
}

}  // namespace poqk::report
