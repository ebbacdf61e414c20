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

#ifndef CUNEILAB_SYNTHETIC_HPP_
#define CUNEILAB_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

// Rule-governed generator of Ur III style administrative phrases. Tags
// follow the expert rules (names carry their usual prefixes and
// determinatives, month and year names follow "iti" and "mu") with a
// share of names no rule covers, plus lexical and label noise.
struct SyntheticOptions {
  std::size_t phrases = 1000;
  std::uint64_t seed = 0;
  // Chance that a token's surface is replaced by a random sign string.
  double lexical_noise = 0.02;
  // Chance that a token's gold tag is replaced by a random other tag.
  double label_noise = 0.01;
  bool ner = false;  // NER inventory instead of POS
};

// Tagged corpus; phrase i depends only on (seed, i).
Corpus GenerateSynthetic(const SyntheticOptions& options);

}  // namespace cuneilab

#endif  // CUNEILAB_SYNTHETIC_HPP_
