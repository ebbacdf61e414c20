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

#ifndef CUNEILAB_INTERPRET_HPP_
#define CUNEILAB_INTERPRET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cuneilab/corpus.hpp"
#include "cuneilab/tagger.hpp"

namespace cuneilab {

// The decision being explained: "the tag at `position` is `label`".
struct Target {
  std::size_t position = 0;
  std::string label;

  std::string Describe() const;  // "tag of token 3 = GN"
  bool operator==(const Target&) const = default;
};

// Confidence of a model in `target` with the tokens at `masked` occluded.
// Implementations must be pure and safe to call from several threads.
class ScoredModel {
 public:
  virtual ~ScoredModel() = default;
  virtual double Score(const Phrase& phrase,
                       const std::vector<std::size_t>& masked,
                       const Target& target) const = 0;
};

// Posterior marginal P(tag at position = label) of a tagger on the masked
// phrase. Throws UnknownLabel or IndexOutOfRange.
class TaggerScorer : public ScoredModel {
 public:
  explicit TaggerScorer(const Tagger& tagger) : tagger_(tagger) {}
  double Score(const Phrase& phrase, const std::vector<std::size_t>& masked,
               const Target& target) const override;

 private:
  const Tagger& tagger_;
};

// The tagger's own Viterbi decision at `position`.
Target PredictedTarget(const Tagger& tagger, const Phrase& phrase,
                       std::size_t position);

enum class AttributionMethod { kOcclusion, kLeaveOneOut, kShapleyExact, kShapleySampled };

std::string_view AttributionMethodName(AttributionMethod method);
AttributionMethod ParseAttributionMethod(std::string_view name);

inline constexpr std::size_t kMaxExactShapleyTokens = 12;

struct AttributionMap {
  Phrase phrase;
  Target target;
  AttributionMethod method = AttributionMethod::kOcclusion;
  std::size_t samples = 0;  // sampled Shapley only
  std::uint64_t seed = 0;   // sampled Shapley only
  double baseline_score = 0.0;  // score with nothing masked
  std::vector<double> scores;   // one per token
  // Optional sign-level occlusion, [token][sign]; empty when not computed.
  std::vector<std::vector<double>> sign_scores;

  bool operator==(const AttributionMap&) const = default;
};

// score(nothing masked) - score(token i masked).
AttributionMap Occlusion(const ScoredModel& model, const Phrase& phrase,
                         const Target& target);

// score(phrase) - score(phrase without token i). Removing the target
// token itself is not meaningful, so that position is masked instead.
AttributionMap LeaveOneOut(const ScoredModel& model, const Phrase& phrase,
                           const Target& target);

// Shapley values of the game v(S) = score(mask every token outside S),
// over all 2^n coalitions. Throws TooManyTokensForExact above
// kMaxExactShapleyTokens. Coalitions are scored on `threads` threads.
AttributionMap ShapleyExact(const ScoredModel& model, const Phrase& phrase,
                            const Target& target, int threads = 1);

// Monte Carlo estimate from `samples` seeded random permutations.
AttributionMap ShapleySampled(const ScoredModel& model, const Phrase& phrase,
                              const Target& target, std::size_t samples,
                              std::uint64_t seed);

// Fills map.sign_scores with the drop in score when a single sign is
// replaced by the mask surface.
void AddSignOcclusion(const ScoredModel& model, AttributionMap& map);

struct AnnotationMask {
  std::string phrase_id;
  std::set<std::size_t> annotated;
};

// TSV "phrase_id<TAB>idx1,idx2,..." (an empty list is allowed).
std::map<std::string, AnnotationMask> ReadAnnotationMasks(
    std::istream& in, const std::string& source = {});

// Share of positive attribution mass that falls on annotated tokens; 0
// when there is no positive mass. Throws PhraseMismatch when the mask is
// for another phrase or points past its end.
double Plausibility(const AttributionMap& map, const AnnotationMask& mask);

// "#cuneilab-attr v1" text format; scores round-trip exactly.
void WriteAttribution(const AttributionMap& map, std::ostream& out);
AttributionMap ReadAttribution(std::istream& in, const std::string& source = {});
void SaveAttribution(const AttributionMap& map, const std::filesystem::path& path);
AttributionMap LoadAttribution(const std::filesystem::path& path);

enum class RenderFormat { kHtml, kAnsi };
enum class Correctness { kCorrect, kWrong, kUnknown };

Correctness ParseCorrectness(std::string_view name);

struct RenderItem {
  const AttributionMap* map = nullptr;
  Correctness correctness = Correctness::kUnknown;
};

// Token backgrounds shade from white towards green (positive) or red
// (negative) in proportion to |score| / max |score|. HTML output is a
// standalone page with inline styles.
std::string Render(const std::vector<RenderItem>& items, RenderFormat format);
std::string Render(const AttributionMap& map, RenderFormat format,
                   Correctness correctness);

}  // namespace cuneilab

#endif  // CUNEILAB_INTERPRET_HPP_
