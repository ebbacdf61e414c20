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

#ifndef CUNEILAB_TOOLS_CONFIG_HPP_
#define CUNEILAB_TOOLS_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace cuneilab::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ConfigEntry {
  std::string value;
  std::size_t line = 0;
};

// Flat "key = value" file; '#' starts a comment line. Keys outside
// `allowed` are rejected, as are repeated keys. Values of keys in
// `path_keys` are resolved against the directory holding the file.
std::map<std::string, ConfigEntry> ParseConfig(std::istream& in,
                                               const std::filesystem::path& path,
                                               const std::set<std::string>& allowed,
                                               const std::set<std::string>& path_keys);

std::map<std::string, ConfigEntry> LoadConfig(const std::filesystem::path& path,
                                              const std::set<std::string>& allowed,
                                              const std::set<std::string>& path_keys);

}  // namespace cuneilab::cli

#endif  // CUNEILAB_TOOLS_CONFIG_HPP_
