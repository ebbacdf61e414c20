//
// Copyright 2026 The cuneilab Authors
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
//

#include "config.hpp"

#include <fstream>

namespace cuneilab::cli {
namespace {

std::string Trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line,
                         const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

std::map<std::string, ConfigEntry> ParseConfig(std::istream& in,
                                               const std::filesystem::path& path,
                                               const std::set<std::string>& allowed,
                                               const std::set<std::string>& path_keys) {
  const std::string source = path.string();
  const std::filesystem::path base = path.parent_path();
  std::map<std::string, ConfigEntry> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, "expected 'key = value'");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "missing key");
    if (value.empty()) throw ConfigError(source, line_no, "missing value for '" + key + "'");
    if (!allowed.count(key)) {
      throw ConfigError(source, line_no, "unknown key '" + key + "'");
    }
    if (path_keys.count(key)) {
      std::filesystem::path p(value);
      if (p.is_relative()) value = (base / p).lexically_normal().string();
    }
    if (!out.emplace(key, ConfigEntry{value, line_no}).second) {
      throw ConfigError(source, line_no, "key '" + key + "' set twice");
    }
  }
  return out;
}

std::map<std::string, ConfigEntry> LoadConfig(const std::filesystem::path& path,
                                              const std::set<std::string>& allowed,
                                              const std::set<std::string>& path_keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return ParseConfig(in, path, allowed, path_keys);
}

}  // namespace cuneilab::cli
