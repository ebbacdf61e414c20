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

#ifndef CUNEILAB_HMM_HPP_
#define CUNEILAB_HMM_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

// First-order HMM tagger with add-k smoothed estimates, in the log domain.
//
// Emissions are stored sparsely: `log_emission[t]` holds the words seen
// with tag t, and every other outcome (vocabulary words unseen with t, and
// the UNK bucket) shares `log_emission_floor[t]`. Rows normalise over
// vocab + {UNK}. Impossible events are -inf.
struct HmmModel {
  TagSet tagset = TagSet::Pos();
  double smoothing_k = 0.0;
  std::vector<double> log_initial;
  std::vector<std::vector<double>> log_transition;  // [from][to]
  std::vector<std::map<std::string, double>> log_emission;
  std::vector<double> log_emission_floor;
  std::set<std::string> vocab;

  double LogInitial(int tag) const { return log_initial[tag]; }
  double LogTransition(int from, int to) const {
    return log_transition[from][to];
  }
  // Masked tokens contribute 0 for every tag.
  double LogEmission(int tag, const Token& token) const;
};

struct TagPath {
  std::vector<int> tags;
  double score = 0.0;
};

// Throws EmptyCorpus, InvalidArgument (k < 0) or TagOutsideTagset. Tags
// that never occur in a given context get a uniform row when k == 0.
HmmModel TrainHmm(const Corpus& corpus, double smoothing_k);

// Exact argmax of log P(tags, tokens); ties go to the lower tag index.
TagPath ViterbiHmm(const HmmModel& model, const Phrase& phrase);

// log P(tokens) by the forward algorithm.
double SequenceLogLikelihood(const HmmModel& model, const Phrase& phrase);

// P(tag_i = t | tokens) for every position, by forward-backward.
std::vector<std::vector<double>> HmmPosteriors(const HmmModel& model,
                                               const Phrase& phrase);

// "#cuneilab-hmm v1" text format.
void WriteHmm(const HmmModel& model, std::ostream& out);
HmmModel ReadHmm(std::istream& in, const std::string& source = {});
void SaveHmm(const HmmModel& model, const std::filesystem::path& path);
HmmModel LoadHmm(const std::filesystem::path& path);

}  // namespace cuneilab

#endif  // CUNEILAB_HMM_HPP_
