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

#ifndef CUNEILAB_CRF_HPP_
#define CUNEILAB_CRF_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cuneilab/corpus.hpp"
#include "cuneilab/hmm.hpp"
#include "cuneilab/rules.hpp"

namespace cuneilab {

enum class TemplateKind {
  kBias,
  kWordIdentity,
  kSignIdentity,  // param: token offset in {-1, 0, +1}
  kPrefix,        // param: k code points, 1..4
  kSuffix,        // param: k code points, 1..4
  kContainsDeterminative,
  kIsNumericSign,
  kRuleFeature,
  kPrevWordIdentity,
  kNextWordIdentity,
  kTagBigram,
};

struct FeatureTemplate {
  TemplateKind kind = TemplateKind::kBias;
  int param = 0;

  // "bias", "word", "sign:-1", "prefix:3", "suffix:2", "det", "numeric",
  // "rules", "prev-word", "next-word", "bigram".
  std::string Name() const;
  static FeatureTemplate Parse(std::string_view name);

  bool operator==(const FeatureTemplate&) const = default;
};

// bias, word, sign:-1/0/+1, prefix:1..4, suffix:1..4, det, numeric, rules,
// prev-word, next-word, bigram.
std::vector<FeatureTemplate> DefaultTemplates();

// Feature strings active at `position`, sorted and unique. Nothing is
// emitted from a masked token: its own lexical features vanish and
// neighbours ignore it as context. Throws IndexOutOfRange.
std::vector<std::string> ExtractFeatureStrings(
    const std::vector<FeatureTemplate>& templates, const RuleSet& rules,
    const Phrase& phrase, std::size_t position);

class FeatureDictionary {
 public:
  // Returns the id, allocating the next dense id for a new string.
  int Intern(const std::string& feature);
  std::optional<int> Find(const std::string& feature) const;
  const std::string& Name(int id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
};

// Sorted ids of the binary features that are on.
using FeatureVector = std::vector<int>;

// Linear-chain CRF. Weights are laid out as F x T state weights
// (feature-major) followed by T x T transition weights [from][to].
class CrfModel {
 public:
  CrfModel(TagSet tagset, std::vector<FeatureTemplate> templates,
           RuleSet rules, FeatureDictionary dictionary, double l2_sigma2);

  const TagSet& tagset() const { return tagset_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  const RuleSet& rules() const { return rules_; }
  const FeatureDictionary& dictionary() const { return dictionary_; }
  double l2_sigma2() const { return l2_sigma2_; }

  std::size_t num_tags() const { return tagset_.size(); }
  std::size_t num_features() const { return dictionary_.size(); }
  std::size_t num_weights() const {
    return num_features() * num_tags() + num_tags() * num_tags();
  }
  bool has_transitions() const;

  std::size_t StateIndex(int feature, int tag) const {
    return static_cast<std::size_t>(feature) * num_tags() +
           static_cast<std::size_t>(tag);
  }
  std::size_t TransitionIndex(int from, int to) const {
    return num_features() * num_tags() +
           static_cast<std::size_t>(from) * num_tags() +
           static_cast<std::size_t>(to);
  }

  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_weights() { return weights_; }

  // Features unknown to the dictionary are dropped.
  FeatureVector Features(const Phrase& phrase, std::size_t position) const;

 private:
  TagSet tagset_;
  std::vector<FeatureTemplate> templates_;
  RuleSet rules_;
  FeatureDictionary dictionary_;
  double l2_sigma2_;
  std::vector<double> weights_;
};

// Per-position state scores [position][tag].
std::vector<std::vector<double>> StateScores(const CrfModel& model,
                                             const Phrase& phrase);

// Additive score of one tag path (state + transition weights).
double PathScore(const CrfModel& model, const Phrase& phrase,
                 const std::vector<int>& tags);

// log Z by the forward recursion.
double LogPartition(const CrfModel& model, const Phrase& phrase);

struct CrfMarginals {
  double log_z = 0.0;           // forward recursion
  double log_z_backward = 0.0;  // backward recursion
  std::vector<std::vector<double>> node;               // [i][t]
  std::vector<std::vector<std::vector<double>>> edge;  // [i][a][b], i -> i+1
};

CrfMarginals Marginals(const CrfModel& model, const Phrase& phrase);

// Exact max-score path; ties go to the lower tag index.
TagPath ViterbiCrf(const CrfModel& model, const Phrase& phrase);

struct NllResult {
  double nll = 0.0;
  std::vector<double> gradient;
};

// Negative conditional log-likelihood of `batch` plus |w|^2 / (2 sigma^2),
// and its gradient (expected minus empirical counts plus w / sigma^2).
// Throws LabelLengthMismatch.
NllResult NllAndGradient(const CrfModel& model,
                         const std::vector<TaggedPhrase>& batch);

enum class OptimizerKind { kLbfgs, kGradientDescent };

struct CrfTrainOptions {
  double l2_sigma2 = 10.0;
  OptimizerKind optimizer = OptimizerKind::kLbfgs;
  int max_iters = 200;
  double grad_tol = 1e-4;  // on the infinity norm
  int lbfgs_memory = 10;
  // Batch gradients are summed over `threads` contiguous chunks in a fixed
  // order, so results are reproducible for a given thread count.
  int threads = 1;
  // Unset: start from zero weights. Set: uniform(-1, 1) from this seed.
  std::optional<std::uint64_t> random_init_seed;
  std::function<void(int iteration, double objective, double grad_norm)>
      progress;
};

struct CrfTrainReport {
  int iterations = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;  // one entry per accepted iterate
};

// Builds the feature dictionary from `corpus` and minimises the
// regularised NLL. Throws EmptyCorpus or DivergenceDetected.
CrfModel TrainCrf(const Corpus& corpus, const RuleSet& rules,
                  const std::vector<FeatureTemplate>& templates,
                  const CrfTrainOptions& options = {},
                  CrfTrainReport* report = nullptr);

// "#cuneilab-crf v1" text format.
void WriteCrf(const CrfModel& model, std::ostream& out);
CrfModel ReadCrf(std::istream& in, const std::string& source = {});
void SaveCrf(const CrfModel& model, const std::filesystem::path& path);
CrfModel LoadCrf(const std::filesystem::path& path);

}  // namespace cuneilab

#endif  // CUNEILAB_CRF_HPP_
