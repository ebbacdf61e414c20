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

#ifndef CUNEILAB_METRICS_HPP_
#define CUNEILAB_METRICS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(TagSet tagset);

  void Add(int gold, int pred, std::size_t count = 1);
  std::size_t At(int gold, int pred) const;
  std::size_t Total() const { return total_; }
  std::size_t Correct() const;
  std::size_t GoldSupport(int tag) const;
  std::size_t Predicted(int tag) const;
  const TagSet& tagset() const { return tagset_; }

 private:
  TagSet tagset_;
  std::vector<std::size_t> counts_;  // gold-major
  std::size_t total_ = 0;
};

// Token-level confusion over aligned gold/predicted corpora. Throws
// AlignmentMismatch when phrase counts, phrase lengths or tagsets differ.
ConfusionMatrix Confusion(const std::vector<TaggedPhrase>& gold,
                          const std::vector<TaggedPhrase>& pred,
                          const TagSet& tagset);

enum class Averaging { kPerClass, kMicro, kWeighted };

struct ClassScores {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct PrfReport {
  Averaging averaging = Averaging::kWeighted;
  // For kPerClass these are the unweighted means over supported classes.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<ClassScores> per_class;  // tagset order
  std::size_t scored = 0;
  std::size_t errors = 0;
};

// 0/0 precision or recall counts as 0. Weighted averaging uses gold
// support and skips unsupported classes.
PrfReport Prf1(const ConfusionMatrix& confusion, Averaging averaging);
PrfReport Prf1(const std::vector<TaggedPhrase>& gold,
               const std::vector<TaggedPhrase>& pred, const TagSet& tagset,
               Averaging averaging);

// Per-class rows for labels that occur, then one row per averaging.
std::string FormatPrfTable(const ConfusionMatrix& confusion);

// Percentage of misclassified words, e.g. 8 of 496 -> 1.6129.
double ErrorRatePercent(std::size_t wrong, std::size_t scored);

// BLEU over whitespace tokens with uniform weights on n = 1..max_n.
// Orders for which the hypotheses contain no n-grams at all are left out of
// the geometric mean, which keeps the score defined on very short lines.
// Returns a value in [0, 1]. Throws LengthMismatch or EmptyInput.
double CorpusBleu(const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references, int max_n = 4);
// Single pair, add-one smoothing on n >= 2 precisions.
double SentenceBleu(const std::string& hypothesis, const std::string& reference,
                    int max_n = 4);

// (p_o - p_e) / (1 - p_e); 1 when both annotators use one identical label.
double CohenKappa(const std::vector<std::string>& a,
                  const std::vector<std::string>& b);

struct HumanEvalRecord {
  std::string model_id;
  std::string example_id;
  std::string annotator_id;
  int score = 0;
};

inline constexpr int kRubricMin = 1;  // incorrect
inline constexpr int kRubricMax = 3;  // good

struct HumanEvalReport {
  std::map<std::string, double> model_means;
  std::map<std::string, std::size_t> model_counts;
  // Keyed by (annotator_a, annotator_b) with a < b.
  std::map<std::pair<std::string, std::string>, double> pairwise_kappa;
  std::map<std::pair<std::string, std::string>, std::size_t> pairwise_overlap;

  double MeanKappa() const;
  // Aligned table followed by "key value" lines.
  std::string Format() const;
};

// Kappa for an annotator pair uses the (model, example) items both rated.
// Throws EmptyInput, ScoreOutOfRange or NoOverlap.
HumanEvalReport AggregateHumanEval(const std::vector<HumanEvalRecord>& records);

// TSV "model<TAB>example<TAB>annotator<TAB>score".
std::vector<HumanEvalRecord> ReadHumanEval(std::istream& in,
                                           const std::string& source = {});

// "key value" result blocks written by `eval` and collected by `report`.
struct EvalResult {
  std::string name;
  std::string averaging;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t scored = 0;
  std::size_t errors = 0;
};

std::string_view AveragingName(Averaging averaging);
Averaging ParseAveraging(std::string_view name);

std::string FormatEvalResult(const EvalResult& result);
EvalResult ParseEvalResult(std::istream& in, const std::string& source = {});
// Aligned comparison table plus machine-readable lines; throws NoInputs.
std::string FormatComparison(const std::vector<EvalResult>& results);

}  // namespace cuneilab

#endif  // CUNEILAB_METRICS_HPP_
