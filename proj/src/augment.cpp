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

#include "cuneilab/augment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"
#include "text_util.hpp"

namespace cuneilab {

using internal::SplitWhitespace;

// --- Embeddings ---------------------------------------------------------

std::optional<double> Cosine(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                    " components");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  }
}

void EmbeddingTable::Add(const std::string& word, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "'" + word + "' has " + std::to_string(vector.size()) +
                    " components, expected " + std::to_string(dimension_));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + word + "' has a non-finite component");
    }
  }
  if (word.empty()) throw Error(ErrorCode::kInvalidArgument, "empty word");
  if (!vectors_.emplace(word, std::move(vector)).second) {
    throw Error(ErrorCode::kInvalidArgument, "'" + word + "' listed twice");
  }
}

const std::vector<double>* EmbeddingTable::Find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<std::string> EmbeddingTable::Neighbors(const std::string& word,
                                                   double threshold) const {
  const std::vector<double>* v = Find(word);
  if (!v) return {};
  std::vector<std::pair<double, std::string>> hits;
  for (const auto& [other, u] : vectors_) {
    if (other == word) continue;
    auto c = Cosine(*v, u);
    if (c && *c >= threshold) hits.emplace_back(*c, other);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(std::move(h.second));
  return out;
}

EmbeddingTable ReadEmbeddings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!internal::Trim(line).empty()) return true;
    }
    return false;
  };
  if (!next()) throw Error(ErrorCode::kEmptyInput, "no embedding header", 0, source);
  auto header = SplitWhitespace(line);
  if (header.size() != 2) {
    throw Error(ErrorCode::kMalformedLine, "expected header 'N D'", line_no, source);
  }
  const std::uint64_t count = internal::ParseUint(header[0], line_no, source);
  const std::uint64_t dim = internal::ParseUint(header[1], line_no, source);
  if (dim == 0) {
    throw Error(ErrorCode::kMalformedLine, "dimension must be positive", line_no,
                source);
  }
  EmbeddingTable table(dim);
  while (next()) {
    auto f = SplitWhitespace(line);
    if (f.size() != dim + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected a word and " + std::to_string(dim) + " components",
                  line_no, source);
    }
    std::vector<double> v;
    v.reserve(dim);
    for (std::size_t i = 1; i < f.size(); ++i) {
      v.push_back(internal::ParseDouble(f[i], line_no, source));
    }
    try {
      table.Add(f[0], std::move(v));
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), line_no, source);
    }
  }
  if (table.size() != count) {
    throw Error(ErrorCode::kMalformedLine,
                "header announces " + std::to_string(count) + " vectors, found " +
                    std::to_string(table.size()),
                line_no, source);
  }
  return table;
}

void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dimension() << '\n';
  for (const auto& [word, v] : table.vectors()) {
    out << word;
    for (double x : v) out << ' ' << internal::FormatDouble(x);
    out << '\n';
  }
}

namespace {

template <typename T>
T LoadWith(const std::filesystem::path& path,
           T (*read)(std::istream&, const std::string&)) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return read(in, path.string());
}

// Reads non-blank, non-comment TSV lines as (line number, fields).
template <typename F>
void ForEachTsvLine(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    f(line_no, internal::Split(line, '\t'));
  }
}

}  // namespace

EmbeddingTable LoadEmbeddings(const std::filesystem::path& path) {
  return LoadWith(path, &ReadEmbeddings);
}

// --- Lexicons -----------------------------------------------------------

SynonymLexicon ReadSynonyms(std::istream& in, const std::string& source) {
  SynonymLexicon lex;
  ForEachTsvLine(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
    if (f.size() != 2) {
      throw Error(ErrorCode::kMalformedLine, "expected word<TAB>syn1,syn2,...",
                  line_no, source);
    }
    std::string word(internal::Trim(f[0]));
    if (word.empty() || SplitWhitespace(word).size() != 1) {
      throw Error(ErrorCode::kMalformedLine, "bad headword", line_no, source);
    }
    if (internal::Trim(f[1]).empty()) {
      throw Error(ErrorCode::kMalformedLine, "'" + word + "' has no synonyms",
                  line_no, source);
    }
    std::vector<std::string> syns;
    for (const std::string& s : internal::Split(f[1], ',')) {
      std::string syn(internal::Trim(s));
      if (syn.empty() || syn == word) continue;
      if (std::find(syns.begin(), syns.end(), syn) == syns.end()) syns.push_back(syn);
    }
    if (lex.entries.count(word)) {
      throw Error(ErrorCode::kDuplicateId, "'" + word + "' listed twice", line_no,
                  source);
    }
    // A word listed only as its own synonym has nothing to substitute.
    if (syns.empty()) return;
    if (!lex.entries.emplace(word, std::move(syns)).second) {
      throw Error(ErrorCode::kDuplicateId, "'" + word + "' listed twice", line_no,
                  source);
    }
  });
  return lex;
}

SynonymLexicon LoadSynonyms(const std::filesystem::path& path) {
  return LoadWith(path, &ReadSynonyms);
}

EntityLexicon ReadEntityLexicon(std::istream& in, const std::string& source) {
  EntityLexicon lex;
  ForEachTsvLine(in, [&](std::size_t line_no, const std::vector<std::string>& f) {
    if (f.size() != 2) {
      throw Error(ErrorCode::kMalformedLine, "expected LABEL<TAB>surface", line_no,
                  source);
    }
    std::string label(internal::Trim(f[0]));
    std::string surface(internal::Trim(f[1]));
    if (label.empty() || SplitWhitespace(surface).size() != 1) {
      throw Error(ErrorCode::kMalformedLine, "expected LABEL<TAB>surface", line_no,
                  source);
    }
    try {
      TokenizeSigns(surface);
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), line_no, source);
    }
    auto& list = lex[label];
    if (std::find(list.begin(), list.end(), surface) == list.end()) {
      list.push_back(surface);
    }
  });
  return lex;
}

EntityLexicon LoadEntityLexicon(const std::filesystem::path& path) {
  return LoadWith(path, &ReadEntityLexicon);
}

// --- NE substitution ----------------------------------------------------

Corpus NeSubstitute(const Corpus& tagged, const EntityLexicon& lexicon,
                    std::size_t multiplier, std::uint64_t seed) {
  if (tagged.kind() != CorpusKind::kTagged) {
    throw Error(ErrorCode::kInvalidArgument, "NE substitution needs a tagged corpus");
  }
  if (multiplier == 0) throw Error(ErrorCode::kInvalidArgument, "multiplier must be >= 1");
  if (std::none_of(lexicon.begin(), lexicon.end(),
                   [](const auto& kv) { return !kv.second.empty(); })) {
    throw Error(ErrorCode::kEmptyLexicon, "entity lexicon has no surfaces");
  }
  const TagSet& tagset = tagged.tagset();
  std::vector<TaggedPhrase> out(tagged.tagged());
  for (std::size_t i = 0; i < tagged.tagged().size(); ++i) {
    const TaggedPhrase& tp = tagged.tagged()[i];
    std::vector<std::pair<std::size_t, const std::vector<std::string>*>> covered;
    for (std::size_t j = 0; j < tp.tags.size(); ++j) {
      auto it = lexicon.find(tagset.Label(tp.tags[j]));
      if (it != lexicon.end() && !it->second.empty()) covered.emplace_back(j, &it->second);
    }
    if (covered.empty()) continue;
    const std::vector<std::string> original = tp.phrase.Surfaces();
    for (std::size_t v = 0; v < multiplier; ++v) {
      Rng rng(DeriveSeed(seed, {i, v}));
      std::vector<std::string> surfaces = original;
      for (const auto& [j, list] : covered) surfaces[j] = rng.Pick(*list);
      if (surfaces == original) continue;
      Phrase phrase = MakePhrase(surfaces, tp.phrase.id + ".ne" + std::to_string(v + 1),
                                 std::max(kDefaultMaxTokens, surfaces.size()));
      phrase.genre = tp.phrase.genre;
      out.push_back({std::move(phrase), tp.tags});
    }
  }
  return Corpus::Tagged(std::move(out), tagset, tagged.config());
}

// --- Character edits ----------------------------------------------------

std::string_view CharOpName(CharOp op) {
  switch (op) {
    case CharOp::kSubstitute: return "substitute";
    case CharOp::kDelete: return "delete";
    case CharOp::kInsert: return "insert";
    case CharOp::kSwapAdjacent: return "swap";
  }
  return "substitute";
}

CharOp ParseCharOp(std::string_view name) {
  for (CharOp op : AllCharOps()) {
    if (CharOpName(op) == name) return op;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown character edit '" + std::string(name) +
                  "' (expected substitute|delete|insert|swap)");
}

std::set<CharOp> AllCharOps() {
  return {CharOp::kSubstitute, CharOp::kDelete, CharOp::kInsert,
          CharOp::kSwapAdjacent};
}

namespace {

std::string Concat(const std::vector<std::string>& units) {
  std::string s;
  for (const auto& u : units) s += u;
  return s;
}

bool IsLetterUnit(const std::string& unit) {
  return unit.size() > 1 ||
         (unit.size() == 1 && std::isalnum(static_cast<unsigned char>(unit[0])));
}

void ApplyToUnits(std::vector<std::string>& units, const CharEdit& edit) {
  const std::size_t n = units.size();
  auto out_of_range = [&]() {
    return Error(ErrorCode::kIndexOutOfRange,
                 std::string(CharOpName(edit.op)) + " at " +
                     std::to_string(edit.position) + " on a line of " +
                     std::to_string(n) + " characters");
  };
  switch (edit.op) {
    case CharOp::kSubstitute:
      if (edit.position >= n) throw out_of_range();
      units[edit.position] = std::string(1, edit.letter);
      break;
    case CharOp::kDelete:
      if (edit.position >= n) throw out_of_range();
      units.erase(units.begin() + static_cast<std::ptrdiff_t>(edit.position));
      break;
    case CharOp::kInsert:
      if (edit.position > n) throw out_of_range();
      units.insert(units.begin() + static_cast<std::ptrdiff_t>(edit.position),
                   std::string(1, edit.letter));
      break;
    case CharOp::kSwapAdjacent:
      if (edit.position + 1 >= n) throw out_of_range();
      std::swap(units[edit.position], units[edit.position + 1]);
      break;
  }
}

}  // namespace

std::string ApplyCharEdit(std::string_view line, const CharEdit& edit) {
  auto units = internal::Utf8Units(line);
  ApplyToUnits(units, edit);
  return Concat(units);
}

std::string CharSwap(std::string_view line, const std::set<CharOp>& ops,
                     std::size_t edits, std::uint64_t seed) {
  if (ops.empty()) throw Error(ErrorCode::kInvalidArgument, "no character edits enabled");
  if (edits == 0) throw Error(ErrorCode::kInvalidArgument, "edits must be >= 1");
  Rng rng(seed);
  auto units = internal::Utf8Units(line);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t n = units.size();
    std::vector<std::size_t> run(n, 0);  // length of the letter run at i
    for (std::size_t i = 0; i < n;) {
      if (!IsLetterUnit(units[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && IsLetterUnit(units[j])) ++j;
      for (std::size_t k = i; k < j; ++k) run[k] = j - i;
      i = j;
    }
    std::map<CharOp, std::vector<std::size_t>> sites;
    for (std::size_t i = 0; i < n; ++i) {
      if (run[i] == 0) continue;
      sites[CharOp::kSubstitute].push_back(i);
      sites[CharOp::kInsert].push_back(i);
      if (run[i] >= 2) sites[CharOp::kDelete].push_back(i);
      if (i + 1 < n && run[i + 1] != 0) sites[CharOp::kSwapAdjacent].push_back(i);
    }
    std::vector<CharOp> feasible;
    for (CharOp op : ops) {
      if (!sites[op].empty()) feasible.push_back(op);
    }
    if (feasible.empty()) {
      throw Error(ErrorCode::kLineTooShort,
                  "no enabled edit fits '" + std::string(line) + "'");
    }
    CharEdit edit;
    edit.op = rng.Pick(feasible);
    edit.position = rng.Pick(sites[edit.op]);
    if (edit.op == CharOp::kSubstitute) {
      const std::string& current = units[edit.position];
      const bool lower = current.size() == 1 && current[0] >= 'a' && current[0] <= 'z';
      std::size_t k = rng.Below(lower ? 25 : 26);
      if (lower && static_cast<char>('a' + k) >= current[0]) ++k;
      edit.letter = static_cast<char>('a' + k);
    } else if (edit.op == CharOp::kInsert) {
      edit.letter = static_cast<char>('a' + rng.Below(26));
    }
    ApplyToUnits(units, edit);
  }
  return Concat(units);
}

// --- Word substitution --------------------------------------------------

namespace {

// Replaces up to `max_replacements` tokens that have candidates, choosing
// positions and replacements from `seed`.
template <typename Candidates>
std::string SubstituteTokens(std::string_view line, Candidates&& candidates,
                             std::size_t max_replacements, std::uint64_t seed) {
  auto tokens = SplitWhitespace(line);
  std::vector<std::pair<std::size_t, std::vector<std::string>>> sites;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::vector<std::string> c = candidates(tokens[i]);
    if (!c.empty()) sites.emplace_back(i, std::move(c));
  }
  if (sites.empty() || max_replacements == 0) return std::string(line);
  Rng rng(seed);
  rng.Shuffle(sites);
  const std::size_t k = std::min(max_replacements, sites.size());
  for (std::size_t s = 0; s < k; ++s) {
    tokens[sites[s].first] = rng.Pick(sites[s].second);
  }
  return internal::Join(tokens, " ");
}

void CheckThreshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cosine threshold must be in (0, 1]");
  }
}

}  // namespace

std::string LexiconSubstitute(std::string_view line, const SynonymLexicon& lexicon,
                              std::size_t max_replacements, std::uint64_t seed) {
  return SubstituteTokens(
      line,
      [&](const std::string& w) {
        auto it = lexicon.entries.find(w);
        return it == lexicon.entries.end() ? std::vector<std::string>{} : it->second;
      },
      max_replacements, seed);
}

std::string EmbeddingSubstitute(std::string_view line, const EmbeddingTable& table,
                                double threshold, std::size_t max_replacements,
                                std::uint64_t seed) {
  CheckThreshold(threshold);
  return SubstituteTokens(
      line, [&](const std::string& w) { return table.Neighbors(w, threshold); },
      max_replacements, seed);
}

// --- Plans --------------------------------------------------------------

std::string_view TechniqueName(Technique technique) {
  switch (technique) {
    case Technique::kEmbeddingNeighbor: return "embedding";
    case Technique::kLexicon: return "lexicon";
    case Technique::kCharSwap: return "charswap";
    case Technique::kNeSubstitution: return "ne";
  }
  return "embedding";
}

Technique ParseTechnique(std::string_view name) {
  for (Technique t : {Technique::kEmbeddingNeighbor, Technique::kLexicon,
                      Technique::kCharSwap, Technique::kNeSubstitution}) {
    if (TechniqueName(t) == name) return t;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown technique '" + std::string(name) +
                  "' (expected embedding|lexicon|charswap|ne)");
}

std::size_t AugmentPlan::MultiplierFor(Technique technique) const {
  auto it = multiplier_overrides.find(technique);
  return it == multiplier_overrides.end() ? multiplier : it->second;
}

Corpus RunPlan(const Corpus& lines, const AugmentPlan& plan,
               const AugmentResources& resources, AugmentReport* report) {
  CheckThreshold(plan.cosine_threshold);
  for (Technique t : plan.techniques) {
    if (plan.MultiplierFor(t) == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(TechniqueName(t)) + " multiplier must be >= 1");
    }
    const bool missing =
        (t == Technique::kEmbeddingNeighbor && !resources.embeddings) ||
        (t == Technique::kLexicon && !resources.synonyms) ||
        (t == Technique::kNeSubstitution && !resources.entities);
    if (missing) {
      throw Error(ErrorCode::kMissingResource,
                  std::string(TechniqueName(t)) + " needs its resource file");
    }
  }

  // Gazetteer view: surface -> other surfaces sharing one of its labels.
  std::map<std::string, std::vector<std::string>> gazetteer;
  if (resources.entities && plan.techniques.count(Technique::kNeSubstitution)) {
    std::map<std::string, std::set<std::string>> alt;
    for (const auto& [label, surfaces] : *resources.entities) {
      for (const auto& s : surfaces) {
        for (const auto& o : surfaces) {
          if (o != s) alt[s].insert(o);
        }
      }
    }
    for (auto& [s, set] : alt) {
      if (!set.empty()) gazetteer[s].assign(set.begin(), set.end());
    }
  }
  // Neighbour lists are computed once per distinct word.
  std::map<std::string, std::vector<std::string>> neighbors;
  auto neighbor_list = [&](const std::string& w) -> const std::vector<std::string>& {
    auto it = neighbors.find(w);
    if (it == neighbors.end()) {
      it = neighbors
               .emplace(w, resources.embeddings->Neighbors(w, plan.cosine_threshold))
               .first;
    }
    return it->second;
  };

  std::vector<Phrase> out;
  std::set<std::string> originals;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back(lines.PhraseAt(i));
    originals.insert(lines.PhraseAt(i).Text());
  }
  AugmentReport rep;
  rep.originals = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Phrase& phrase = lines.PhraseAt(i);
    const std::string text = phrase.Text();
    for (Technique t : plan.techniques) {
      for (std::size_t v = 0; v < plan.MultiplierFor(t); ++v) {
        const std::uint64_t seed =
            DeriveSeed(plan.seed, {static_cast<std::uint64_t>(t), i, v});
        std::string variant;
        switch (t) {
          case Technique::kEmbeddingNeighbor:
            variant = SubstituteTokens(text, neighbor_list, plan.max_replacements, seed);
            break;
          case Technique::kLexicon:
            variant = LexiconSubstitute(text, *resources.synonyms,
                                        plan.max_replacements, seed);
            break;
          case Technique::kCharSwap:
            try {
              variant = CharSwap(text, plan.charswap_ops, plan.charswap_edits, seed);
            } catch (const Error& e) {
              // Lines without room for an edit (e.g. "[...]") get no variant.
              if (e.code() != ErrorCode::kLineTooShort) throw;
              variant = text;
            }
            break;
          case Technique::kNeSubstitution:
            variant = SubstituteTokens(
                text,
                [&](const std::string& w) {
                  auto it = gazetteer.find(w);
                  return it == gazetteer.end() ? std::vector<std::string>{}
                                               : it->second;
                },
                phrase.size(), seed);
            break;
        }
        if (originals.count(variant)) {
          ++rep.dropped[t];
          continue;
        }
        Phrase p = MakePhrase(variant,
                              phrase.id + "." + std::string(TechniqueName(t)) +
                                  std::to_string(v + 1),
                              std::max(kDefaultMaxTokens, phrase.size() * 4));
        p.genre = phrase.genre;
        out.push_back(std::move(p));
        ++rep.kept[t];
      }
    }
  }
  rep.total = out.size();
  if (report) *report = rep;
  return Corpus::Monolingual(std::move(out), lines.kind() == CorpusKind::kMonolingual
                                                 ? lines.config()
                                                 : CorpusConfig::kMonolingual);
}

}  // namespace cuneilab
