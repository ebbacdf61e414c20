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

#ifndef CUNEILAB_AUGMENT_HPP_
#define CUNEILAB_AUGMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

// Cosine of two equal-length vectors; nullopt when either has zero norm.
// Throws DimensionMismatch.
std::optional<double> Cosine(const std::vector<double>& a,
                             const std::vector<double>& b);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  // Throws DimensionMismatch, or InvalidArgument for non-finite components
  // and repeated words.
  void Add(const std::string& word, std::vector<double> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* Find(const std::string& word) const;
  const std::map<std::string, std::vector<double>>& vectors() const {
    return vectors_;
  }

  // Words v != word with cosine(word, v) >= threshold, by descending
  // cosine then by word. Empty for unknown or zero-norm words.
  std::vector<std::string> Neighbors(const std::string& word,
                                     double threshold) const;

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>> vectors_;
};

// word2vec text format: "N D" header, then "word v1 ... vD" per line.
EmbeddingTable ReadEmbeddings(std::istream& in, const std::string& source = {});
void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out);
EmbeddingTable LoadEmbeddings(const std::filesystem::path& path);

struct SynonymLexicon {
  std::map<std::string, std::vector<std::string>> entries;
};

// TSV "word<TAB>syn1,syn2,...". A word listed as its own synonym is
// dropped from its list; a line left with no synonyms is malformed.
SynonymLexicon ReadSynonyms(std::istream& in, const std::string& source = {});
SynonymLexicon LoadSynonyms(const std::filesystem::path& path);

// NER label -> surfaces, from TSV "LABEL<TAB>surface" lines.
using EntityLexicon = std::map<std::string, std::vector<std::string>>;
EntityLexicon ReadEntityLexicon(std::istream& in, const std::string& source = {});
EntityLexicon LoadEntityLexicon(const std::filesystem::path& path);

// Labelled-data augmentation. Each of `multiplier` variants of a phrase
// replaces every token whose label has lexicon surfaces with one of them;
// tags are kept. Phrases without a covered token yield nothing, and a
// variant identical to its original is dropped. Output is the originals
// followed by the variants. Throws EmptyLexicon when no label has surfaces.
Corpus NeSubstitute(const Corpus& tagged, const EntityLexicon& lexicon,
                    std::size_t multiplier, std::uint64_t seed);

enum class CharOp { kSubstitute, kDelete, kInsert, kSwapAdjacent };

std::string_view CharOpName(CharOp op);
CharOp ParseCharOp(std::string_view name);
std::set<CharOp> AllCharOps();

// `position` counts code points from the start of the line. Substitute and
// Insert use `letter`; SwapAdjacent exchanges position and position + 1.
struct CharEdit {
  CharOp op = CharOp::kSubstitute;
  std::size_t position = 0;
  char letter = 'a';
};

// Throws IndexOutOfRange.
std::string ApplyCharEdit(std::string_view line, const CharEdit& edit);

// `edits` random edits drawn from `ops`. Only letters and digits are
// edited (any non-ASCII code point counts as a letter), deletions never
// empty a run of letters and swaps stay within one run, so sign
// structure and token count survive. Substitution always changes the
// letter. Throws LineTooShort when no enabled edit fits the line.
std::string CharSwap(std::string_view line, const std::set<CharOp>& ops,
                     std::size_t edits, std::uint64_t seed);

// Up to `max_replacements` tokens that have synonyms are replaced by a
// seeded choice among them. Returns `line` unchanged when nothing applies.
std::string LexiconSubstitute(std::string_view line, const SynonymLexicon& lexicon,
                              std::size_t max_replacements, std::uint64_t seed);

// As LexiconSubstitute with candidates taken from embedding neighbours at
// cosine >= threshold. Throws InvalidArgument unless threshold is in (0, 1].
std::string EmbeddingSubstitute(std::string_view line, const EmbeddingTable& table,
                                double threshold, std::size_t max_replacements,
                                std::uint64_t seed);

enum class Technique { kEmbeddingNeighbor, kLexicon, kCharSwap, kNeSubstitution };

std::string_view TechniqueName(Technique technique);
Technique ParseTechnique(std::string_view name);

struct AugmentPlan {
  std::set<Technique> techniques;
  std::size_t multiplier = 4;  // variants per technique and line
  std::map<Technique, std::size_t> multiplier_overrides;
  std::uint64_t seed = 0;
  double cosine_threshold = 0.8;
  std::set<CharOp> charswap_ops = AllCharOps();
  std::size_t charswap_edits = 1;
  std::size_t max_replacements = 2;

  std::size_t MultiplierFor(Technique technique) const;
};

// Borrowed; each must be set when its technique is enabled.
struct AugmentResources {
  const EmbeddingTable* embeddings = nullptr;
  const SynonymLexicon* synonyms = nullptr;
  const EntityLexicon* entities = nullptr;  // gazetteer for kNeSubstitution
};

struct AugmentReport {
  std::size_t originals = 0;
  std::map<Technique, std::size_t> kept;     // variants kept per technique
  std::map<Technique, std::size_t> dropped;  // equal to some original line
  std::size_t total = 0;
};

// Originals, then for each line in order its variants by technique. On
// monolingual lines, NE substitution swaps a token listed under some label
// for another surface of that label. Throws MissingResource.
Corpus RunPlan(const Corpus& lines, const AugmentPlan& plan,
               const AugmentResources& resources, AugmentReport* report = nullptr);

}  // namespace cuneilab

#endif  // CUNEILAB_AUGMENT_HPP_
