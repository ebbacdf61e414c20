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

#include "cuneilab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"
#include "text_util.hpp"

namespace cuneilab {

using internal::SplitWhitespace;
using internal::Trim;

// --- Tokens -------------------------------------------------------------

Token TokenizeSigns(std::string_view surface, std::size_t index) {
  if (surface.empty()) {
    throw Error(ErrorCode::kEmptySurface, "token surface is empty");
  }
  Token token;
  token.surface = std::string(surface);
  token.index = index;

  std::string separator;
  std::string base;
  bool have_base = false;
  auto flush_base = [&] {
    if (!have_base) return;
    token.signs.push_back({base, SignKind::kBase, separator});
    separator.clear();
    base.clear();
    have_base = false;
  };

  std::size_t i = 0;
  while (i < surface.size()) {
    char c = surface[i];
    if (c == '{') {
      std::size_t close = surface.find('}', i + 1);
      std::size_t nested = surface.find('{', i + 1);
      if (close == std::string_view::npos ||
          (nested != std::string_view::npos && nested < close)) {
        throw Error(ErrorCode::kUnbalancedBraces,
                    "unmatched '{' in '" + token.surface + "'");
      }
      flush_base();
      token.signs.push_back({std::string(surface.substr(i, close - i + 1)),
                             SignKind::kDeterminative, separator});
      separator.clear();
      i = close + 1;
    } else if (c == '}') {
      throw Error(ErrorCode::kUnbalancedBraces,
                  "unmatched '}' in '" + token.surface + "'");
    } else if (c == '-') {
      // "a--b", leading or trailing hyphens leave empty base signs so the
      // surface stays reconstructible.
      if (have_base || separator == "-" ||
          (token.signs.empty() && !have_base)) {
        have_base = true;
        flush_base();
      }
      separator = "-";
      ++i;
    } else {
      base.push_back(c);
      have_base = true;
      ++i;
    }
  }
  if (have_base || separator == "-") {
    have_base = true;
    flush_base();
  }
  return token;
}

std::string Detokenize(const Token& token) {
  std::string out;
  for (const Sign& sign : token.signs) {
    out += sign.separator_before;
    out += sign.text;
  }
  return out;
}

bool IsMask(const Token& token) { return token.surface == kMaskSurface; }

// --- Phrases ------------------------------------------------------------

std::vector<std::string> Phrase::Surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

std::string Phrase::Text() const { return internal::Join(Surfaces(), " "); }

bool operator==(const Phrase& a, const Phrase& b) {
  return a.tokens == b.tokens;
}

Phrase MakePhrase(const std::vector<std::string>& surfaces, std::string id,
                  std::size_t max_tokens) {
  if (surfaces.empty()) {
    throw Error(ErrorCode::kEmptySurface, "phrase has no tokens");
  }
  if (surfaces.size() > max_tokens) {
    throw Error(ErrorCode::kPhraseTooLong,
                std::to_string(surfaces.size()) + " tokens exceed the limit of " +
                    std::to_string(max_tokens));
  }
  Phrase phrase;
  phrase.id = std::move(id);
  phrase.tokens.reserve(surfaces.size());
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    for (char c : surfaces[i]) {
      if (internal::IsSpace(c)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "token '" + surfaces[i] + "' contains whitespace");
      }
    }
    phrase.tokens.push_back(TokenizeSigns(surfaces[i], i));
  }
  phrase.source_line = phrase.Text();
  return phrase;
}

Phrase MakePhrase(std::string_view line, std::string id,
                  std::size_t max_tokens) {
  Phrase phrase = MakePhrase(SplitWhitespace(line), std::move(id), max_tokens);
  phrase.source_line = std::string(line);
  return phrase;
}

Phrase MaskTokens(const Phrase& phrase,
                  const std::vector<std::size_t>& positions) {
  Phrase out = phrase;
  for (std::size_t pos : positions) {
    if (pos >= out.tokens.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "mask position " + std::to_string(pos));
    }
    out.tokens[pos] = TokenizeSigns(kMaskSurface, pos);
  }
  return out;
}

// --- TagSet -------------------------------------------------------------

TagSet::TagSet(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {}

const TagSet& TagSet::Pos() {
  static const TagSet kPos("POS", {"AJ", "AV", "CNJ", "DET", "J", "N", "NE",
                                   "NU", "O", "V"});
  return kPos;
}

const TagSet& TagSet::Ner() {
  static const TagSet kNer("NER", {"AN", "DN", "EN", "FN", "GN", "MN", "O",
                                   "ON", "PN", "RN", "SN", "TN", "WN"});
  return kNer;
}

const TagSet& TagSet::ByName(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  if (upper == "POS") return Pos();
  if (upper == "NER") return Ner();
  throw Error(ErrorCode::kInvalidArgument,
              "unknown tagset '" + std::string(name) + "' (expected pos|ner)");
}

TagSet TagSet::Custom(std::string name, std::vector<std::string> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tagset has no labels");
  }
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty() || !seen.insert(label).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tagset labels must be unique and non-empty");
    }
    for (char c : label) {
      if (internal::IsSpace(c)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "tagset label contains whitespace");
      }
    }
  }
  return TagSet(std::move(name), std::move(labels));
}

std::optional<int> TagSet::IndexOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

const std::string& TagSet::Label(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= labels_.size()) {
    throw Error(ErrorCode::kTagOutsideTagset,
                "tag index " + std::to_string(index));
  }
  return labels_[static_cast<std::size_t>(index)];
}

// --- Corpus -------------------------------------------------------------

std::string_view CorpusConfigName(CorpusConfig config) {
  switch (config) {
    case CorpusConfig::kUrIIISeg: return "UrIIISeg";
    case CorpusConfig::kUrIIIComp: return "UrIIIComp";
    case CorpusConfig::kAllSeg: return "AllSeg";
    case CorpusConfig::kAllComp: return "AllComp";
    case CorpusConfig::kMonolingual: return "Monolingual";
  }
  return "Monolingual";
}

CorpusConfig ParseCorpusConfig(std::string_view name) {
  for (CorpusConfig c :
       {CorpusConfig::kUrIIISeg, CorpusConfig::kUrIIIComp,
        CorpusConfig::kAllSeg, CorpusConfig::kAllComp,
        CorpusConfig::kMonolingual}) {
    if (CorpusConfigName(c) == name) return c;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corpus config '" + std::string(name) + "'");
}

std::string_view CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kMonolingual: return "monolingual";
    case CorpusKind::kTagged: return "tagged";
    case CorpusKind::kParallel: return "parallel";
  }
  return "monolingual";
}

Corpus::Corpus(Entries entries, std::optional<TagSet> tagset,
               CorpusConfig config)
    : entries_(std::move(entries)), tagset_(std::move(tagset)),
      config_(config) {}

Corpus Corpus::Monolingual(std::vector<Phrase> phrases, CorpusConfig config) {
  return Corpus(std::move(phrases), std::nullopt, config);
}

Corpus Corpus::Tagged(std::vector<TaggedPhrase> phrases, TagSet tagset,
                      CorpusConfig config) {
  for (const TaggedPhrase& tp : phrases) {
    if (tp.tags.size() != tp.phrase.tokens.size()) {
      throw Error(ErrorCode::kLabelLengthMismatch,
                  "phrase " + tp.phrase.id + " has " +
                      std::to_string(tp.phrase.tokens.size()) +
                      " tokens but " + std::to_string(tp.tags.size()) +
                      " tags");
    }
    for (int tag : tp.tags) {
      if (tag < 0 || static_cast<std::size_t>(tag) >= tagset.size()) {
        throw Error(ErrorCode::kTagOutsideTagset,
                    "tag index " + std::to_string(tag) + " in phrase " +
                        tp.phrase.id);
      }
    }
  }
  return Corpus(std::move(phrases), std::move(tagset), config);
}

Corpus Corpus::Parallel(std::vector<ParallelPair> pairs, CorpusConfig config) {
  for (const ParallelPair& p : pairs) {
    if (p.source.tokens.empty() || Trim(p.target).empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "parallel pair with an empty side");
    }
  }
  return Corpus(std::move(pairs), std::nullopt, config);
}

CorpusKind Corpus::kind() const {
  return static_cast<CorpusKind>(entries_.index());
}

std::size_t Corpus::size() const {
  return std::visit([](const auto& v) { return v.size(); }, entries_);
}

const TagSet& Corpus::tagset() const {
  if (!tagset_) {
    throw Error(ErrorCode::kInvalidArgument, "corpus is not tagged");
  }
  return *tagset_;
}

const std::vector<Phrase>& Corpus::phrases() const {
  if (auto* v = std::get_if<std::vector<Phrase>>(&entries_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "corpus is not monolingual");
}

const std::vector<TaggedPhrase>& Corpus::tagged() const {
  if (auto* v = std::get_if<std::vector<TaggedPhrase>>(&entries_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "corpus is not tagged");
}

const std::vector<ParallelPair>& Corpus::pairs() const {
  if (auto* v = std::get_if<std::vector<ParallelPair>>(&entries_)) return *v;
  throw Error(ErrorCode::kInvalidArgument, "corpus is not parallel");
}

const Phrase& Corpus::PhraseAt(std::size_t i) const {
  switch (kind()) {
    case CorpusKind::kMonolingual: return phrases().at(i);
    case CorpusKind::kTagged: return tagged().at(i).phrase;
    case CorpusKind::kParallel: return pairs().at(i).source;
  }
  throw Error(ErrorCode::kInvalidArgument, "unreachable corpus kind");
}

Corpus Corpus::Slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, size());
  begin = std::min(begin, end);
  Entries sliced = std::visit(
      [&](const auto& v) -> Entries {
        using Vec = std::decay_t<decltype(v)>;
        return Vec(v.begin() + static_cast<std::ptrdiff_t>(begin),
                   v.begin() + static_cast<std::ptrdiff_t>(end));
      },
      entries_);
  return Corpus(std::move(sliced), tagset_, config_);
}

Corpus Corpus::Select(const std::vector<std::size_t>& indices) const {
  Entries picked = std::visit(
      [&](const auto& v) -> Entries {
        std::decay_t<decltype(v)> out;
        out.reserve(indices.size());
        for (std::size_t i : indices) out.push_back(v.at(i));
        return out;
      },
      entries_);
  return Corpus(std::move(picked), tagset_, config_);
}

Corpus Corpus::AsMonolingual() const {
  std::vector<Phrase> phrases;
  phrases.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) phrases.push_back(PhraseAt(i));
  return Monolingual(std::move(phrases), config_);
}

bool Corpus::operator==(const Corpus& other) const {
  return config_ == other.config_ && tagset_ == other.tagset_ &&
         entries_ == other.entries_;
}

// --- Text formats -------------------------------------------------------

namespace {

// Wraps token-level errors with the line they came from.
template <typename Fn>
auto AtLine(std::size_t line_no, const std::string& source, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.line() != 0) throw;
    throw Error(e.code(), e.message(), line_no, source);
  }
}

std::string StripCr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

Corpus ParseConll(std::istream& in, const TagSet& tagset,
                  const std::string& source) {
  std::vector<TaggedPhrase> phrases;
  std::vector<std::string> surfaces;
  std::vector<int> tags;
  std::size_t first_line = 0;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (surfaces.empty()) return;
    std::string id = std::to_string(phrases.size() + 1);
    Phrase phrase = AtLine(first_line, source,
                           [&] { return MakePhrase(surfaces, id); });
    phrases.push_back({std::move(phrase), tags});
    surfaces.clear();
    tags.clear();
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = StripCr(raw);
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected TOKEN<TAB>LABEL", line_no, source);
    }
    std::string surface = line.substr(0, tab);
    std::string label = line.substr(tab + 1);
    for (char c : surface) {
      if (internal::IsSpace(c)) {
        throw Error(ErrorCode::kMalformedLine, "token contains whitespace",
                    line_no, source);
      }
    }
    std::optional<int> tag = tagset.IndexOf(label);
    if (!tag) {
      throw Error(ErrorCode::kUnknownLabel,
                  "label '" + label + "' not in " + tagset.name(), line_no,
                  source);
    }
    AtLine(line_no, source, [&] { return TokenizeSigns(surface); });
    if (surfaces.empty()) first_line = line_no;
    surfaces.push_back(std::move(surface));
    tags.push_back(*tag);
  }
  flush();
  if (phrases.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no phrases", 0, source);
  }
  return Corpus::Tagged(std::move(phrases), tagset);
}

void WriteConll(const Corpus& corpus, std::ostream& out) {
  const TagSet& tagset = corpus.tagset();
  for (const TaggedPhrase& tp : corpus.tagged()) {
    for (std::size_t i = 0; i < tp.phrase.tokens.size(); ++i) {
      out << tp.phrase.tokens[i].surface << '\t' << tagset.Label(tp.tags[i])
          << '\n';
    }
    out << '\n';
  }
}

Corpus ParseMonolingual(std::istream& in, const std::string& source) {
  std::vector<Phrase> phrases;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = StripCr(raw);
    if (Trim(line).empty()) {
      throw Error(ErrorCode::kMalformedLine, "blank line", line_no, source);
    }
    std::string id = std::to_string(phrases.size() + 1);
    phrases.push_back(
        AtLine(line_no, source, [&] { return MakePhrase(line, id); }));
  }
  if (phrases.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no phrases", 0, source);
  }
  return Corpus::Monolingual(std::move(phrases));
}

void WriteMonolingual(const Corpus& corpus, std::ostream& out) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out << corpus.PhraseAt(i).Text() << '\n';
  }
}

namespace {

ParallelPair MakePair(const std::string& src, const std::string& tgt,
                      std::string id, std::size_t line_no,
                      const std::string& source) {
  std::string target(Trim(tgt));
  if (Trim(src).empty() || target.empty()) {
    throw Error(ErrorCode::kMalformedLine, "empty side in parallel pair",
                line_no, source);
  }
  for (char c : target) {
    if (c == '\t') {
      throw Error(ErrorCode::kMalformedLine, "target contains a tab",
                  line_no, source);
    }
  }
  Phrase phrase = AtLine(line_no, source, [&] { return MakePhrase(src, id); });
  return {std::move(phrase), std::move(target)};
}

}  // namespace

Corpus ParseParallelTsv(std::istream& in, const std::string& source) {
  std::vector<ParallelPair> pairs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = StripCr(raw);
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::kMalformedLine, "expected SOURCE<TAB>TARGET",
                  line_no, source);
    }
    pairs.push_back(MakePair(line.substr(0, tab), line.substr(tab + 1),
                             std::to_string(pairs.size() + 1), line_no,
                             source));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no pairs", 0, source);
  }
  return Corpus::Parallel(std::move(pairs));
}

Corpus ParseParallelFiles(std::istream& source_lines,
                          std::istream& target_lines,
                          const std::string& source) {
  std::vector<ParallelPair> pairs;
  std::string src, tgt;
  std::size_t line_no = 0;
  while (true) {
    bool has_src = static_cast<bool>(std::getline(source_lines, src));
    bool has_tgt = static_cast<bool>(std::getline(target_lines, tgt));
    if (!has_src && !has_tgt) break;
    ++line_no;
    if (has_src != has_tgt) {
      throw Error(ErrorCode::kLineCountMismatch,
                  "source and target files differ in line count", line_no,
                  source);
    }
    pairs.push_back(MakePair(StripCr(src), StripCr(tgt),
                             std::to_string(pairs.size() + 1), line_no,
                             source));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no pairs", 0, source);
  }
  return Corpus::Parallel(std::move(pairs));
}

void WriteParallelTsv(const Corpus& corpus, std::ostream& out) {
  for (const ParallelPair& p : corpus.pairs()) {
    out << p.source.Text() << '\t' << p.target << '\n';
  }
}

namespace {

constexpr std::string_view kCorpusMagic = "#cuneilab-corpus";

}  // namespace

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  out << kCorpusMagic << " v1 kind=" << CorpusKindName(corpus.kind())
      << " config=" << CorpusConfigName(corpus.config());
  if (corpus.kind() == CorpusKind::kTagged) {
    const TagSet& ts = corpus.tagset();
    out << " tagset=" << ts.name() << '\n';
    if (!(ts == TagSet::Pos()) && !(ts == TagSet::Ner())) {
      out << "#labels " << internal::Join(ts.labels(), " ") << '\n';
    }
  } else {
    out << '\n';
  }
  switch (corpus.kind()) {
    case CorpusKind::kMonolingual: WriteMonolingual(corpus, out); break;
    case CorpusKind::kTagged: WriteConll(corpus, out); break;
    case CorpusKind::kParallel: WriteParallelTsv(corpus, out); break;
  }
}

Corpus ReadCorpus(std::istream& in, const std::string& source) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::kBadMagic, "empty file", 1, source);
  }
  std::vector<std::string> fields = SplitWhitespace(StripCr(header));
  if (fields.empty() || fields[0] != kCorpusMagic) {
    throw Error(ErrorCode::kBadMagic, "missing corpus header", 1, source);
  }
  if (fields.size() < 2 || fields[1] != "v1") {
    throw Error(ErrorCode::kUnsupportedVersion,
                "version '" + (fields.size() > 1 ? fields[1] : "") + "'", 1,
                source);
  }
  std::string kind, config, tagset_name;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    std::size_t eq = fields[i].find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kBadMagic, "malformed header field", 1, source);
    }
    std::string key = fields[i].substr(0, eq);
    std::string value = fields[i].substr(eq + 1);
    if (key == "kind") {
      kind = value;
    } else if (key == "config") {
      config = value;
    } else if (key == "tagset") {
      tagset_name = value;
    } else {
      throw Error(ErrorCode::kBadMagic, "unknown header key '" + key + "'", 1,
                  source);
    }
  }
  CorpusConfig cfg = AtLine(1, source, [&] { return ParseCorpusConfig(config); });

  // Body line numbers are reported relative to the file.
  std::ostringstream rest;
  rest << in.rdbuf();
  std::string body = rest.str();
  std::size_t offset = 1;

  const bool empty_body = Trim(body).empty();
  if (kind == "tagged") {
    std::optional<TagSet> tagset;
    if (tagset_name == "POS" || tagset_name == "NER") {
      tagset = TagSet::ByName(tagset_name);
    } else {
      std::size_t nl = body.find('\n');
      std::string labels_line = body.substr(0, nl);
      std::vector<std::string> parts = SplitWhitespace(labels_line);
      if (parts.empty() || parts[0] != "#labels") {
        throw Error(ErrorCode::kBadMagic, "custom tagset without #labels", 2,
                    source);
      }
      tagset = AtLine(2, source, [&] {
        return TagSet::Custom(tagset_name, {parts.begin() + 1, parts.end()});
      });
      body = nl == std::string::npos ? "" : body.substr(nl + 1);
      offset = 2;
    }
    if (Trim(body).empty()) return Corpus::Tagged({}, *tagset, cfg);
    std::istringstream body_in(body);
    try {
      Corpus parsed = ParseConll(body_in, *tagset, source);
      return Corpus::Tagged(parsed.tagged(), *tagset, cfg);
    } catch (const Error& e) {
      if (e.line() == 0) throw;
      throw Error(e.code(), e.message(), e.line() + offset, source);
    }
  }
  std::istringstream body_in(body);
  try {
    if (empty_body && kind == "monolingual") {
      return Corpus::Monolingual({}, cfg);
    }
    if (empty_body && kind == "parallel") return Corpus::Parallel({}, cfg);
    if (kind == "monolingual") {
      return Corpus::Monolingual(ParseMonolingual(body_in, source).phrases(),
                                 cfg);
    }
    if (kind == "parallel") {
      return Corpus::Parallel(ParseParallelTsv(body_in, source).pairs(), cfg);
    }
  } catch (const Error& e) {
    if (e.line() == 0) throw;
    throw Error(e.code(), e.message(), e.line() + offset, source);
  }
  throw Error(ErrorCode::kBadMagic, "unknown corpus kind '" + kind + "'", 1,
              source);
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteCorpus(corpus, out);
  internal::WriteFile(path, out.str());
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for reading", 0,
                path.string());
  }
  return ReadCorpus(in, path.string());
}

// --- Construction -------------------------------------------------------

std::set<std::string> DefaultTerminators() { return {".", ";", "!", "?"}; }

CompResult BuildComp(const Corpus& segments,
                     const std::set<std::string>& terminators) {
  const auto& pairs = segments.pairs();
  std::vector<ParallelPair> merged;
  std::vector<bool> unterminated;

  std::vector<std::string> sources;
  std::vector<std::string> targets;
  auto close_group = [&](bool flagged) {
    if (targets.empty()) return;
    ParallelPair pair;
    pair.source =
        MakePhrase(sources, std::to_string(merged.size() + 1),
                   std::max(sources.size(), kDefaultMaxTokens));
    pair.target = internal::Join(targets, " ");
    merged.push_back(std::move(pair));
    unterminated.push_back(flagged);
    sources.clear();
    targets.clear();
  };

  for (const ParallelPair& seg : pairs) {
    for (const Token& t : seg.source.tokens) sources.push_back(t.surface);
    std::string target(Trim(seg.target));
    targets.push_back(target);
    bool closes = std::any_of(
        terminators.begin(), terminators.end(), [&](const std::string& term) {
          return !term.empty() && target.size() >= term.size() &&
                 target.compare(target.size() - term.size(), term.size(),
                                term) == 0;
        });
    if (closes) close_group(false);
  }
  close_group(true);

  CorpusConfig config = segments.config();
  if (config == CorpusConfig::kUrIIISeg) config = CorpusConfig::kUrIIIComp;
  if (config == CorpusConfig::kAllSeg) config = CorpusConfig::kAllComp;
  return {Corpus::Parallel(std::move(merged), config), std::move(unterminated)};
}

std::vector<Corpus> Shard(const Corpus& corpus, std::size_t shard_size) {
  if (shard_size == 0) {
    throw Error(ErrorCode::kZeroShardSize, "shard size must be positive");
  }
  std::vector<Corpus> shards;
  for (std::size_t begin = 0; begin < corpus.size(); begin += shard_size) {
    shards.push_back(corpus.Slice(begin, begin + shard_size));
  }
  return shards;
}

std::pair<Corpus, Corpus> SplitTrainTest(const Corpus& corpus,
                                         double test_fraction,
                                         std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "test fraction must lie in (0, 1)");
  }
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot split an empty corpus");
  }
  const std::size_t n = corpus.size();
  const auto n_test =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  if (n_test == 0 || n_test == n) {
    throw Error(ErrorCode::kDegenerateSplit,
                std::to_string(n) + " entries at fraction " +
                    internal::FormatDouble(test_fraction) +
                    " leave one side empty");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);
  std::vector<bool> is_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < n; ++i) {
    (is_test[i] ? test_idx : train_idx).push_back(i);
  }
  return {corpus.Select(train_idx), corpus.Select(test_idx)};
}

}  // namespace cuneilab
