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

#include "cuneilab/error.hpp"

#include <string>

namespace cuneilab {
namespace {

std::string Describe(ErrorCode code, const std::string& message,
                     std::size_t line, const std::string& source) {
  std::string out(ErrorCodeName(code));
  if (!source.empty() || line != 0) {
    out += " at ";
    out += source.empty() ? "<input>" : source;
    if (line != 0) out += ":" + std::to_string(line);
  }
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kUnbalancedBraces: return "UnbalancedBraces";
    case ErrorCode::kEmptySurface: return "EmptySurface";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kZeroShardSize: return "ZeroShardSize";
    case ErrorCode::kDegenerateSplit: return "DegenerateSplit";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kUnknownRuleKind: return "UnknownRuleKind";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kTagOutsideTagset: return "TagOutsideTagset";
    case ErrorCode::kLabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kAlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kLineTooShort: return "LineTooShort";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingResource: return "MissingResource";
    case ErrorCode::kTranslatorFailed: return "TranslatorFailed";
    case ErrorCode::kLineCountMismatch: return "LineCountMismatch";
    case ErrorCode::kTooManyTokensForExact: return "TooManyTokensForExact";
    case ErrorCode::kPhraseMismatch: return "PhraseMismatch";
    case ErrorCode::kPhraseTooLong: return "PhraseTooLong";
    case ErrorCode::kNoInputs: return "NoInputs";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line,
             std::string source)
    : std::runtime_error(Describe(code, message, line, source)),
      code_(code),
      message_(message),
      line_(line),
      source_(std::move(source)) {}

}  // namespace cuneilab
