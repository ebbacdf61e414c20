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

#ifndef CUNEILAB_SRC_TEXT_UTIL_HPP_
#define CUNEILAB_SRC_TEXT_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cuneilab::internal {

std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> Split(std::string_view text, char sep);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view Trim(std::string_view text);
bool IsSpace(char c);

// Shortest decimal text that parses back to the same double; "inf"/"-inf"
// for infinities.
std::string FormatDouble(double value);
// Fixed-point with `digits` decimals, for human-facing reports.
std::string FormatFixed(double value, int digits);
// Whole-string parse; throws MalformedLine(line, source) on failure.
double ParseDouble(std::string_view text, std::size_t line = 0,
                   const std::string& source = {});
std::uint64_t ParseUint(std::string_view text, std::size_t line = 0,
                        const std::string& source = {});

// UTF-8 code points as byte strings. Invalid sequences fall back to one
// byte per unit.
std::vector<std::string> Utf8Units(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
// Splits on '\n'; a final newline does not produce an extra empty line.
std::vector<std::string> ReadLines(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace cuneilab::internal

#endif  // CUNEILAB_SRC_TEXT_UTIL_HPP_
