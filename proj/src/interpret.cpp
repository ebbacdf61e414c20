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

#include "cuneilab/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"
#include "text_util.hpp"

namespace cuneilab {

std::string Target::Describe() const {
  return "tag of token " + std::to_string(position) + " = " + label;
}

double TaggerScorer::Score(const Phrase& phrase,
                           const std::vector<std::size_t>& masked,
                           const Target& target) const {
  if (target.position >= phrase.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "target position " + std::to_string(target.position) +
                    " in a phrase of " + std::to_string(phrase.size()) + " tokens");
  }
  auto tag = tagger_.tagset().IndexOf(target.label);
  if (!tag) {
    throw Error(ErrorCode::kUnknownLabel,
                "'" + target.label + "' is not in the " + tagger_.tagset().name() +
                    " tagset");
  }
  const Phrase view = masked.empty() ? phrase : MaskTokens(phrase, masked);
  return tagger_.Posteriors(view)[target.position][static_cast<std::size_t>(*tag)];
}

Target PredictedTarget(const Tagger& tagger, const Phrase& phrase,
                       std::size_t position) {
  if (position >= phrase.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "target position " + std::to_string(position));
  }
  TagPath path = tagger.Decode(phrase);
  return {position, tagger.tagset().Label(path.tags[position])};
}

std::string_view AttributionMethodName(AttributionMethod method) {
  switch (method) {
    case AttributionMethod::kOcclusion: return "occlusion";
    case AttributionMethod::kLeaveOneOut: return "leave-one-out";
    case AttributionMethod::kShapleyExact: return "shapley-exact";
    case AttributionMethod::kShapleySampled: return "shapley-sampled";
  }
  return "occlusion";
}

AttributionMethod ParseAttributionMethod(std::string_view name) {
  for (auto m : {AttributionMethod::kOcclusion, AttributionMethod::kLeaveOneOut,
                 AttributionMethod::kShapleyExact, AttributionMethod::kShapleySampled}) {
    if (AttributionMethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown attribution method '" + std::string(name) +
                  "' (expected occlusion|leave-one-out|shapley-exact|shapley-sampled)");
}

namespace {

AttributionMap Start(const ScoredModel& model, const Phrase& phrase,
                     const Target& target, AttributionMethod method) {
  if (phrase.size() == 0) throw Error(ErrorCode::kEmptyInput, "empty phrase");
  if (target.position >= phrase.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "target position " + std::to_string(target.position));
  }
  AttributionMap map;
  map.phrase = phrase;
  map.target = target;
  map.method = method;
  map.baseline_score = model.Score(phrase, {}, target);
  map.scores.assign(phrase.size(), 0.0);
  return map;
}

// Positions outside the coalition bitmask `members`.
std::vector<std::size_t> Complement(std::uint32_t members, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(members >> i & 1u)) out.push_back(i);
  }
  return out;
}

}  // namespace

AttributionMap Occlusion(const ScoredModel& model, const Phrase& phrase,
                         const Target& target) {
  AttributionMap map = Start(model, phrase, target, AttributionMethod::kOcclusion);
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    map.scores[i] = map.baseline_score - model.Score(phrase, {i}, target);
  }
  return map;
}

AttributionMap LeaveOneOut(const ScoredModel& model, const Phrase& phrase,
                           const Target& target) {
  AttributionMap map = Start(model, phrase, target, AttributionMethod::kLeaveOneOut);
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    if (i == target.position) {
      map.scores[i] = map.baseline_score - model.Score(phrase, {i}, target);
      continue;
    }
    std::vector<std::string> rest;
    for (std::size_t j = 0; j < phrase.size(); ++j) {
      if (j != i) rest.push_back(phrase.tokens[j].surface);
    }
    Phrase shorter = MakePhrase(rest, phrase.id, phrase.size());
    Target moved = target;
    if (i < target.position) --moved.position;
    map.scores[i] = map.baseline_score - model.Score(shorter, {}, moved);
  }
  return map;
}

AttributionMap ShapleyExact(const ScoredModel& model, const Phrase& phrase,
                            const Target& target, int threads) {
  const std::size_t n = phrase.size();
  if (n > kMaxExactShapleyTokens) {
    throw Error(ErrorCode::kTooManyTokensForExact,
                std::to_string(n) + " tokens; exact Shapley is limited to " +
                    std::to_string(kMaxExactShapleyTokens));
  }
  AttributionMap map = Start(model, phrase, target, AttributionMethod::kShapleyExact);
  const std::uint32_t full = (1u << n) - 1;
  std::vector<double> v(static_cast<std::size_t>(full) + 1);
  auto evaluate = [&](std::uint32_t from, std::uint32_t to) {
    for (std::uint32_t s = from; s < to; ++s) {
      v[s] = s == full ? map.baseline_score
                       : model.Score(phrase, Complement(s, n), target);
    }
  };
  const std::uint32_t total = full + 1;
  const auto workers = static_cast<std::uint32_t>(std::clamp(threads, 1, 64));
  if (workers == 1 || total < 64) {
    evaluate(0, total);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::uint32_t chunk = (total + workers - 1) / workers;
    for (std::uint32_t w = 0; w < workers; ++w) {
      const std::uint32_t from = w * chunk, to = std::min(total, from + chunk);
      pool.emplace_back([&, w, from, to] {
        try {
          evaluate(from, to);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  // weight[k] = k! (n - k - 1)! / n!
  std::vector<double> weight(n);
  for (std::size_t k = 0; k < n; ++k) {
    weight[k] = std::exp(std::lgamma(static_cast<double>(k) + 1) +
                         std::lgamma(static_cast<double>(n - k)) -
                         std::lgamma(static_cast<double>(n) + 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double phi = 0.0;
    for (std::uint32_t s = 0; s <= full; ++s) {
      if (s & bit) continue;
      phi += weight[static_cast<std::size_t>(__builtin_popcount(s))] * (v[s | bit] - v[s]);
    }
    map.scores[i] = phi;
  }
  return map;
}

AttributionMap ShapleySampled(const ScoredModel& model, const Phrase& phrase,
                              const Target& target, std::size_t samples,
                              std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  AttributionMap map = Start(model, phrase, target, AttributionMethod::kShapleySampled);
  map.samples = samples;
  map.seed = seed;
  const std::size_t n = phrase.size();
  // Coalition values are cached by membership string.
  std::unordered_map<std::string, double> cache;
  auto value = [&](const std::string& members) {
    auto it = cache.find(members);
    if (it != cache.end()) return it->second;
    std::vector<std::size_t> masked;
    for (std::size_t i = 0; i < n; ++i) {
      if (members[i] == '0') masked.push_back(i);
    }
    double s = masked.empty() ? map.baseline_score : model.Score(phrase, masked, target);
    cache.emplace(members, s);
    return s;
  };
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::vector<double> sum(n, 0.0);
  // Antithetic pairs: every odd sample walks the previous permutation backwards.
  for (std::size_t k = 0; k < samples; ++k) {
    if (k % 2 == 0) {
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      rng.Shuffle(order);
    } else {
      std::reverse(order.begin(), order.end());
    }
    std::string members(n, '0');
    double prev = value(members);
    for (std::size_t i : order) {
      members[i] = '1';
      double next = value(members);
      sum[i] += next - prev;
      prev = next;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    map.scores[i] = sum[i] / static_cast<double>(samples);
  }
  return map;
}

void AddSignOcclusion(const ScoredModel& model, AttributionMap& map) {
  map.sign_scores.assign(map.phrase.size(), {});
  for (std::size_t i = 0; i < map.phrase.size(); ++i) {
    const Token& token = map.phrase.tokens[i];
    for (std::size_t j = 0; j < token.signs.size(); ++j) {
      Phrase edited = map.phrase;
      Token& t = edited.tokens[i];
      t.signs[j].text = std::string(kMaskSurface);
      t.signs[j].kind = SignKind::kBase;
      t.surface = Detokenize(t);
      map.sign_scores[i].push_back(map.baseline_score -
                                   model.Score(edited, {}, map.target));
    }
  }
}

// --- Annotation masks and plausibility ----------------------------------

std::map<std::string, AnnotationMask> ReadAnnotationMasks(std::istream& in,
                                                          const std::string& source) {
  std::map<std::string, AnnotationMask> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    auto f = internal::Split(line, '\t');
    if (f.size() > 2 || f[0].empty()) {
      throw Error(ErrorCode::kMalformedLine, "expected phrase_id<TAB>idx1,idx2,...",
                  line_no, source);
    }
    AnnotationMask mask;
    mask.phrase_id = f[0];
    if (f.size() == 2) {
      for (const auto& part : internal::Split(f[1], ',')) {
        auto idx = internal::Trim(part);
        if (idx.empty()) continue;
        mask.annotated.insert(internal::ParseUint(idx, line_no, source));
      }
    }
    if (!out.emplace(mask.phrase_id, mask).second) {
      throw Error(ErrorCode::kDuplicateId, "phrase '" + f[0] + "' listed twice",
                  line_no, source);
    }
  }
  return out;
}

double Plausibility(const AttributionMap& map, const AnnotationMask& mask) {
  if (mask.phrase_id != map.phrase.id) {
    throw Error(ErrorCode::kPhraseMismatch,
                "mask for phrase '" + mask.phrase_id + "' applied to phrase '" +
                    map.phrase.id + "'");
  }
  for (std::size_t i : mask.annotated) {
    if (i >= map.scores.size()) {
      throw Error(ErrorCode::kPhraseMismatch,
                  "annotated token " + std::to_string(i) + " is past the end of phrase '" +
                      map.phrase.id + "'");
    }
  }
  double on = 0.0, all = 0.0;
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    const double pos = std::max(map.scores[i], 0.0);
    all += pos;
    if (mask.annotated.count(i)) on += pos;
  }
  return all > 0.0 ? on / all : 0.0;
}

// --- Serialization ------------------------------------------------------

namespace {

constexpr std::string_view kAttrMagic = "#cuneilab-attr v1";

}  // namespace

void WriteAttribution(const AttributionMap& map, std::ostream& out) {
  using internal::FormatDouble;
  out << kAttrMagic << '\n';
  out << "method\t" << AttributionMethodName(map.method);
  if (map.method == AttributionMethod::kShapleySampled) {
    out << '\t' << map.samples << '\t' << map.seed;
  }
  out << '\n';
  out << "target\t" << map.target.position << '\t' << map.target.label << '\n';
  out << "baseline\t" << FormatDouble(map.baseline_score) << '\n';
  out << "phrase\t" << map.phrase.id << '\t' << map.phrase.Text() << '\n';
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    out << "token\t" << i << '\t' << map.phrase.tokens[i].surface << '\t'
        << FormatDouble(map.scores[i]) << '\n';
  }
  for (std::size_t i = 0; i < map.sign_scores.size(); ++i) {
    for (std::size_t j = 0; j < map.sign_scores[i].size(); ++j) {
      out << "sign\t" << i << '\t' << j << '\t' << FormatDouble(map.sign_scores[i][j])
          << '\n';
    }
  }
}

AttributionMap ReadAttribution(std::istream& in, const std::string& source) {
  using internal::ParseDouble;
  using internal::ParseUint;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || internal::Trim(line) != kAttrMagic) {
    if (line.rfind("#cuneilab-attr ", 0) == 0) {
      throw Error(ErrorCode::kUnsupportedVersion, line, 1, source);
    }
    throw Error(ErrorCode::kBadMagic, "not an attribution file", 1, source);
  }
  AttributionMap map;
  bool have_method = false, have_target = false, have_baseline = false,
       have_phrase = false;
  auto bad = [&](const std::string& what) {
    return Error(ErrorCode::kMalformedLine, what, line_no, source);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty()) continue;
    auto f = internal::Split(line, '\t');
    const std::string& key = f[0];
    if (key == "method") {
      if (f.size() < 2) throw bad("method needs a name");
      try {
        map.method = ParseAttributionMethod(f[1]);
      } catch (const Error& e) {
        throw bad(e.message());
      }
      if (map.method == AttributionMethod::kShapleySampled) {
        if (f.size() != 4) throw bad("sampled Shapley needs samples and seed");
        map.samples = ParseUint(f[2], line_no, source);
        map.seed = ParseUint(f[3], line_no, source);
      } else if (f.size() != 2) {
        throw bad("unexpected method parameters");
      }
      have_method = true;
    } else if (key == "target") {
      if (f.size() != 3 || f[2].empty()) throw bad("expected target<TAB>pos<TAB>label");
      map.target = {ParseUint(f[1], line_no, source), f[2]};
      have_target = true;
    } else if (key == "baseline") {
      if (f.size() != 2) throw bad("expected baseline<TAB>score");
      map.baseline_score = ParseDouble(f[1], line_no, source);
      have_baseline = true;
    } else if (key == "phrase") {
      if (f.size() != 3) throw bad("expected phrase<TAB>id<TAB>text");
      try {
        map.phrase = MakePhrase(std::string_view(f[2]), f[1],
                                internal::SplitWhitespace(f[2]).size());
      } catch (const Error& e) {
        throw Error(e.code(), e.message(), line_no, source);
      }
      have_phrase = true;
    } else if (key == "token") {
      if (!have_phrase) throw bad("token before phrase");
      if (f.size() != 4) throw bad("expected token<TAB>idx<TAB>surface<TAB>score");
      const std::size_t idx = ParseUint(f[1], line_no, source);
      if (idx != map.scores.size() || idx >= map.phrase.size() ||
          map.phrase.tokens[idx].surface != f[2]) {
        throw bad("token line does not match the phrase");
      }
      map.scores.push_back(ParseDouble(f[3], line_no, source));
    } else if (key == "sign") {
      if (f.size() != 4) throw bad("expected sign<TAB>token<TAB>sign<TAB>score");
      const std::size_t ti = ParseUint(f[1], line_no, source);
      const std::size_t si = ParseUint(f[2], line_no, source);
      if (map.sign_scores.empty()) map.sign_scores.assign(map.phrase.size(), {});
      if (ti >= map.phrase.size() || si != map.sign_scores[ti].size() ||
          si >= map.phrase.tokens[ti].signs.size()) {
        throw bad("sign line does not match the phrase");
      }
      map.sign_scores[ti].push_back(ParseDouble(f[3], line_no, source));
    } else {
      throw bad("unknown key '" + key + "'");
    }
  }
  if (!have_method || !have_target || !have_baseline || !have_phrase) {
    throw Error(ErrorCode::kMalformedLine, "incomplete attribution file", line_no, source);
  }
  if (map.scores.size() != map.phrase.size()) {
    throw Error(ErrorCode::kMalformedLine, "missing token scores", line_no, source);
  }
  if (map.target.position >= map.phrase.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "target position past the phrase", 0,
                source);
  }
  return map;
}

void SaveAttribution(const AttributionMap& map, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteAttribution(map, out);
  internal::WriteFile(path, out.str());
}

AttributionMap LoadAttribution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return ReadAttribution(in, path.string());
}

}  // namespace cuneilab
