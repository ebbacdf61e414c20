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

#ifndef CUNEILAB_CORPUS_HPP_
#define CUNEILAB_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cuneilab {

// Reserved surface substituted for occluded tokens. It contains no "-" or
// braces, so it tokenizes to a single base sign, and taggers treat it as
// carrying no lexical evidence.
inline constexpr std::string_view kMaskSurface = "⟨mask⟩";
inline constexpr std::size_t kDefaultMaxTokens = 64;

enum class SignKind { kBase, kDeterminative };

struct Sign {
  std::string text;
  SignKind kind = SignKind::kBase;
  std::string separator_before;  // "" or "-"

  bool operator==(const Sign&) const = default;
};

struct Token {
  std::string surface;
  std::vector<Sign> signs;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

// Splits a transliterated word into signs: "-" separates signs outside
// braces and every "{...}" group is a determinative sign of its own.
// Throws EmptySurface or UnbalancedBraces.
Token TokenizeSigns(std::string_view surface, std::size_t index = 0);

// Reassembles the surface from signs and their recorded separators.
std::string Detokenize(const Token& token);

bool IsMask(const Token& token);

enum class Genre { kUrIIIAdmin, kOther };

struct Phrase {
  std::string id;
  std::vector<Token> tokens;
  std::string source_line;
  Genre genre = Genre::kOther;

  std::size_t size() const { return tokens.size(); }
  std::vector<std::string> Surfaces() const;
  // Surfaces joined by single spaces.
  std::string Text() const;
};

// Phrases compare by token content; id, source_line and genre are
// provenance metadata that the text formats do not all carry.
bool operator==(const Phrase& a, const Phrase& b);

Phrase MakePhrase(const std::vector<std::string>& surfaces,
                  std::string id = {},
                  std::size_t max_tokens = kDefaultMaxTokens);
// Whitespace-tokenizes `line`. Throws EmptySurface for blank lines and
// PhraseTooLong above `max_tokens`.
Phrase MakePhrase(std::string_view line, std::string id = {},
                  std::size_t max_tokens = kDefaultMaxTokens);

// Copy of `phrase` with the tokens at `positions` replaced by the mask.
Phrase MaskTokens(const Phrase& phrase,
                  const std::vector<std::size_t>& positions);

// A closed, ordered label inventory. Order is part of the model contract:
// decoders break ties toward the lower index.
class TagSet {
 public:
  static const TagSet& Pos();
  static const TagSet& Ner();
  // "pos" / "ner", case-insensitive.
  static const TagSet& ByName(std::string_view name);
  static TagSet Custom(std::string name, std::vector<std::string> labels);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<int> IndexOf(std::string_view label) const;
  const std::string& Label(int index) const;

  bool operator==(const TagSet&) const = default;

 private:
  TagSet(std::string name, std::vector<std::string> labels);

  std::string name_;
  std::vector<std::string> labels_;
};

struct TaggedPhrase {
  Phrase phrase;
  std::vector<int> tags;

  bool operator==(const TaggedPhrase&) const = default;
};

struct ParallelPair {
  Phrase source;
  std::string target;

  bool operator==(const ParallelPair&) const = default;
};

enum class CorpusConfig { kUrIIISeg, kUrIIIComp, kAllSeg, kAllComp, kMonolingual };
enum class CorpusKind { kMonolingual, kTagged, kParallel };

std::string_view CorpusConfigName(CorpusConfig config);
CorpusConfig ParseCorpusConfig(std::string_view name);
std::string_view CorpusKindName(CorpusKind kind);

// A homogeneous, immutable collection of phrases, tagged phrases or
// parallel pairs.
class Corpus {
 public:
  static Corpus Monolingual(std::vector<Phrase> phrases,
                            CorpusConfig config = CorpusConfig::kMonolingual);
  static Corpus Tagged(std::vector<TaggedPhrase> phrases, TagSet tagset,
                       CorpusConfig config = CorpusConfig::kUrIIISeg);
  static Corpus Parallel(std::vector<ParallelPair> pairs,
                         CorpusConfig config = CorpusConfig::kUrIIISeg);

  CorpusKind kind() const;
  CorpusConfig config() const { return config_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  // Valid for tagged corpora only.
  const TagSet& tagset() const;

  // Typed views; each throws InvalidArgument on the wrong kind.
  const std::vector<Phrase>& phrases() const;
  const std::vector<TaggedPhrase>& tagged() const;
  const std::vector<ParallelPair>& pairs() const;

  // The (source) phrase of entry i for any kind.
  const Phrase& PhraseAt(std::size_t i) const;

  Corpus Slice(std::size_t begin, std::size_t end) const;
  Corpus Select(const std::vector<std::size_t>& indices) const;
  // Tagged/parallel corpus reduced to its (source) phrases.
  Corpus AsMonolingual() const;

  bool operator==(const Corpus& other) const;

 private:
  using Entries = std::variant<std::vector<Phrase>, std::vector<TaggedPhrase>,
                               std::vector<ParallelPair>>;
  Corpus(Entries entries, std::optional<TagSet> tagset, CorpusConfig config);

  Entries entries_;
  std::optional<TagSet> tagset_;
  CorpusConfig config_;
};

// --- Text formats -------------------------------------------------------
// Parsers assign 1-based ordinal ids and report the first offending line.

// "TOKEN<TAB>LABEL" lines, blank line between phrases.
Corpus ParseConll(std::istream& in, const TagSet& tagset,
                  const std::string& source = {});
void WriteConll(const Corpus& corpus, std::ostream& out);

// One whitespace-tokenized phrase per line.
Corpus ParseMonolingual(std::istream& in, const std::string& source = {});
void WriteMonolingual(const Corpus& corpus, std::ostream& out);

// "SOURCE<TAB>TARGET" per line.
Corpus ParseParallelTsv(std::istream& in, const std::string& source = {});
// Two line-aligned files; throws LineCountMismatch when counts differ.
Corpus ParseParallelFiles(std::istream& source_lines,
                          std::istream& target_lines,
                          const std::string& source = {});
void WriteParallelTsv(const Corpus& corpus, std::ostream& out);

// Header-prefixed corpus files:
//   #cuneilab-corpus v1 kind=<kind> config=<config>[ tagset=<name>]
// A custom tagset adds a "#labels A B ..." line. Body is the kind's text
// format above.
void WriteCorpus(const Corpus& corpus, std::ostream& out);
Corpus ReadCorpus(std::istream& in, const std::string& source = {});
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus LoadCorpus(const std::filesystem::path& path);

// --- Corpus construction ------------------------------------------------

std::set<std::string> DefaultTerminators();

struct CompResult {
  Corpus corpus;
  // Parallel to corpus entries; true for a trailing group that never saw a
  // terminator.
  std::vector<bool> unterminated;
};

// Merges consecutive segments into complete sentences, closing a sentence
// at each segment whose trimmed target ends with a terminator.
CompResult BuildComp(const Corpus& segments,
                     const std::set<std::string>& terminators =
                         DefaultTerminators());

// ceil(n / shard_size) contiguous shards. Throws ZeroShardSize.
std::vector<Corpus> Shard(const Corpus& corpus, std::size_t shard_size);

// Seeded partition; round(n * test_fraction) entries go to the test side.
// Both sides keep input order. Must run before any augmentation.
std::pair<Corpus, Corpus> SplitTrainTest(const Corpus& corpus,
                                         double test_fraction,
                                         std::uint64_t seed);

}  // namespace cuneilab

#endif  // CUNEILAB_CORPUS_HPP_
