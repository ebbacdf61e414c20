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

#ifndef CUNEILAB_ERROR_HPP_
#define CUNEILAB_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cuneilab {

// Values are part of the C ABI (see cuneilab.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIoFailure = 2,
  kUnbalancedBraces = 3,
  kEmptySurface = 4,
  kUnknownLabel = 5,
  kMalformedLine = 6,
  kEmptyCorpus = 7,
  kZeroShardSize = 8,
  kDegenerateSplit = 9,
  kBadMagic = 10,
  kUnsupportedVersion = 11,
  kIndexOutOfRange = 12,
  kUnknownRuleKind = 13,
  kDuplicateId = 14,
  kTagOutsideTagset = 15,
  kLabelLengthMismatch = 16,
  kDivergenceDetected = 17,
  kAlignmentMismatch = 18,
  kLengthMismatch = 19,
  kEmptyInput = 20,
  kScoreOutOfRange = 21,
  kNoOverlap = 22,
  kEmptyLexicon = 23,
  kLineTooShort = 24,
  kDimensionMismatch = 25,
  kMissingResource = 26,
  kTranslatorFailed = 27,
  kLineCountMismatch = 28,
  kTooManyTokensForExact = 29,
  kPhraseMismatch = 30,
  kPhraseTooLong = 31,
  kNoInputs = 32,
  kUnknownKey = 33,
  kManifestMismatch = 34,
};

std::string_view ErrorCodeName(ErrorCode code);

// The single exception type thrown by the library. `line` is the 1-based
// input line for parser errors and 0 otherwise; for TranslatorFailed and
// LineCountMismatch it carries the shard index instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0,
        std::string source = {});

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }
  // The message without the code/location prefix that what() carries.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::size_t line_;
  std::string source_;
};

}  // namespace cuneilab

#endif  // CUNEILAB_ERROR_HPP_
