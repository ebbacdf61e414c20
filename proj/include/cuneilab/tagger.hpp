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

#ifndef CUNEILAB_TAGGER_HPP_
#define CUNEILAB_TAGGER_HPP_

#include <filesystem>
#include <variant>
#include <vector>

#include "cuneilab/corpus.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/hmm.hpp"

namespace cuneilab {

enum class TaggerKind { kHmm, kCrf };

// Either trained sequence model behind one decoding interface.
class Tagger {
 public:
  explicit Tagger(HmmModel model) : model_(std::move(model)) {}
  explicit Tagger(CrfModel model) : model_(std::move(model)) {}

  // Dispatches on the file's magic header.
  static Tagger Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  TaggerKind kind() const;
  const TagSet& tagset() const;
  const HmmModel& hmm() const { return std::get<HmmModel>(model_); }
  const CrfModel& crf() const { return std::get<CrfModel>(model_); }

  TagPath Decode(const Phrase& phrase) const;
  // P(tag_i = t | phrase) for every position.
  std::vector<std::vector<double>> Posteriors(const Phrase& phrase) const;

  // Tags every phrase of a (monolingual, tagged or parallel) corpus.
  Corpus TagCorpus(const Corpus& corpus) const;

 private:
  std::variant<HmmModel, CrfModel> model_;
};

}  // namespace cuneilab

#endif  // CUNEILAB_TAGGER_HPP_
