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

#ifndef CUNEILAB_TRANSLATE_HPP_
#define CUNEILAB_TRANSLATE_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

// An external program that reads source lines on stdin and writes exactly
// one translation per line on stdout. Run without a shell; argv[0] is
// looked up on PATH.
struct Translator {
  std::vector<std::string> argv;

  // Space-joined argv, recorded in the manifest.
  std::string Identity() const;
};

struct FtOptions {
  std::size_t shard_size = 1000;
  // Keep shards already recorded in an existing manifest.
  bool resume = true;
};

struct FtResult {
  std::size_t shard_count = 0;
  std::size_t shards_run = 0;      // translated in this call
  std::size_t shards_skipped = 0;  // taken from the manifest
  Corpus merged = Corpus::Parallel({});
};

// Forward translation in shards, strictly in order. `out` receives
// shard_NNNN.src / shard_NNNN.tgt, the merged bitext "merged.tsv"
// (SOURCE<TAB>TARGET) and "manifest.txt", which is rewritten after each
// shard so an interrupted run can resume. Throws TranslatorFailed or
// LineCountMismatch (line() = shard index), ManifestMismatch when a
// manifest from another input or translator is present, and IoFailure.
FtResult ForwardTranslate(const Corpus& monolingual, const Translator& translator,
                          const std::filesystem::path& out,
                          const FtOptions& options = {});

}  // namespace cuneilab

#endif  // CUNEILAB_TRANSLATE_HPP_
