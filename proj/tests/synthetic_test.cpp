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


#include <gtest/gtest.h>

#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/synthetic.hpp"

namespace cuneilab {
namespace {

TEST(Synthetic, DeterministicAndWellFormed) {
  Corpus a = GenerateSynthetic({.phrases = 400, .seed = 9});
  Corpus b = GenerateSynthetic({.phrases = 400, .seed = 9});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == GenerateSynthetic({.phrases = 400, .seed = 10}));
  ASSERT_EQ(a.size(), 400u);
  for (const auto& tp : a.tagged()) {
    EXPECT_EQ(tp.tags.size(), tp.phrase.size());
    EXPECT_GE(tp.phrase.size(), 1u);
    EXPECT_LE(tp.phrase.size(), 19u);
  }
  EXPECT_EQ(a.tagged()[0].phrase.id, "1");
}

TEST(Synthetic, PrefixIsStable) {
  Corpus small = GenerateSynthetic({.phrases = 10, .seed = 4});
  Corpus big = GenerateSynthetic({.phrases = 50, .seed = 4});
  EXPECT_EQ(big.Slice(0, 10), small);
}

TEST(Synthetic, NerInventory) {
  Corpus c = GenerateSynthetic({.phrases = 200, .seed = 1, .ner = true});
  EXPECT_EQ(c.tagset(), TagSet::Ner());
  std::set<std::string> labels;
  for (const auto& tp : c.tagged()) {
    for (int t : tp.tags) labels.insert(c.tagset().Label(t));
  }
  for (const char* l : {"PN", "GN", "DN", "O"}) EXPECT_TRUE(labels.count(l)) << l;
}

TEST(Synthetic, NoiseFreeFollowsRules) {
  // Without noise, tokens after "mu" are royal names or year formulae and
  // "ur-" words are names; check the NER view.
  Corpus c = GenerateSynthetic(
      {.phrases = 300, .seed = 2, .lexical_noise = 0, .label_noise = 0, .ner = true});
  for (const auto& tp : c.tagged()) {
    for (std::size_t i = 0; i < tp.phrase.size(); ++i) {
      const std::string& w = tp.phrase.tokens[i].surface;
      if (w.rfind("{d}", 0) == 0 && w.find('-') == std::string::npos) {
        EXPECT_EQ(c.tagset().Label(tp.tags[i]), "DN") << w;
      }
    }
  }
}

TEST(Synthetic, Errors) {
  EXPECT_THROW(GenerateSynthetic({.phrases = 0}), Error);
  EXPECT_THROW(GenerateSynthetic({.phrases = 5, .lexical_noise = 2.0}), Error);
}

}  // namespace
}  // namespace cuneilab
