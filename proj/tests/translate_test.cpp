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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/translate.hpp"
#include "support/oracle.hpp"

namespace cuneilab {
namespace {

namespace fs = std::filesystem;

Corpus Lines(std::size_t n) {
  std::vector<Phrase> phrases;
  for (std::size_t i = 0; i < n; ++i) {
    phrases.push_back(MakePhrase("sze " + std::to_string(i) + " gur", std::to_string(i + 1)));
  }
  return Corpus::Monolingual(phrases);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ForwardTranslate, IdentityTranslator) {
  auto dir = oracle::TempDir("ft-identity");
  FtResult r = ForwardTranslate(Lines(10), Translator{{"cat"}}, dir, {.shard_size = 5});
  EXPECT_EQ(r.shard_count, 2u);
  EXPECT_EQ(r.shards_run, 2u);
  ASSERT_EQ(r.merged.size(), 10u);
  for (const auto& p : r.merged.pairs()) EXPECT_EQ(p.target, p.source.Text());
  EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
  EXPECT_TRUE(fs::exists(dir / "merged.tsv"));
  fs::remove_all(dir);
}

TEST(ForwardTranslate, ShardConservation) {
  auto dir = oracle::TempDir("ft-conserve");
  Corpus in = Lines(23);
  FtResult r = ForwardTranslate(in, Translator{{"tr", "a-z", "A-Z"}}, dir, {.shard_size = 4});
  EXPECT_EQ(r.shard_count, 6u);
  ASSERT_EQ(r.merged.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(r.merged.pairs()[i].source.Text(), in.PhraseAt(i).Text());
  }
  fs::remove_all(dir);
}

TEST(ForwardTranslate, LineCountMismatch) {
  auto dir = oracle::TempDir("ft-mismatch");
  try {
    ForwardTranslate(Lines(10), Translator{{"head", "-n", "9"}}, dir, {.shard_size = 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLineCountMismatch);
    EXPECT_EQ(e.line(), 0u);
  }
  fs::remove_all(dir);
}

TEST(ForwardTranslate, NonzeroExit) {
  auto dir = oracle::TempDir("ft-fail");
  try {
    ForwardTranslate(Lines(4), Translator{{"sh", "-c", "cat; exit 3"}}, dir, {.shard_size = 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTranslatorFailed);
  }
  try {
    ForwardTranslate(Lines(4), Translator{{"no-such-translator-binary"}},
                     oracle::TempDir("ft-missing"), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTranslatorFailed);
  }
  fs::remove_all(dir);
}

TEST(ForwardTranslate, ManifestReplay) {
  auto dir = oracle::TempDir("ft-replay");
  Corpus in = Lines(12);
  ForwardTranslate(in, Translator{{"cat"}}, dir, {.shard_size = 5});
  const std::string first = Slurp(dir / "merged.tsv");
  FtResult again = ForwardTranslate(in, Translator{{"cat"}}, dir, {.shard_size = 5});
  EXPECT_EQ(again.shards_run, 0u);
  EXPECT_EQ(again.shards_skipped, 3u);
  EXPECT_EQ(Slurp(dir / "merged.tsv"), first);

  // Interrupted run: drop the last shard from the manifest and add junk to
  // the merged file; resume redoes only that shard.
  std::string manifest = Slurp(dir / "manifest.txt");
  manifest.erase(manifest.rfind("shard "));
  std::ofstream(dir / "manifest.txt", std::ios::binary) << manifest;
  std::ofstream(dir / "merged.tsv", std::ios::app | std::ios::binary) << "partial\tjunk\n";
  FtResult resumed = ForwardTranslate(in, Translator{{"cat"}}, dir, {.shard_size = 5});
  EXPECT_EQ(resumed.shards_run, 1u);
  EXPECT_EQ(resumed.shards_skipped, 2u);
  EXPECT_EQ(Slurp(dir / "merged.tsv"), first);

  try {
    ForwardTranslate(Lines(13), Translator{{"cat"}}, dir, {.shard_size = 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestMismatch);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace cuneilab
