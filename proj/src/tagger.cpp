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

#include "cuneilab/tagger.hpp"

#include <fstream>
#include <string>

#include "cuneilab/error.hpp"

namespace cuneilab {

Tagger Tagger::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for reading", 0,
                path.string());
  }
  std::string header;
  std::getline(in, header);
  if (header.rfind("#cuneilab-crf", 0) == 0) return Tagger(LoadCrf(path));
  if (header.rfind("#cuneilab-hmm", 0) == 0) return Tagger(LoadHmm(path));
  throw Error(ErrorCode::kBadMagic, "not a cuneilab model file", 1,
              path.string());
}

void Tagger::Save(const std::filesystem::path& path) const {
  if (kind() == TaggerKind::kCrf) {
    SaveCrf(crf(), path);
  } else {
    SaveHmm(hmm(), path);
  }
}

TaggerKind Tagger::kind() const {
  return std::holds_alternative<CrfModel>(model_) ? TaggerKind::kCrf
                                                  : TaggerKind::kHmm;
}

const TagSet& Tagger::tagset() const {
  return kind() == TaggerKind::kCrf ? crf().tagset() : hmm().tagset;
}

TagPath Tagger::Decode(const Phrase& phrase) const {
  return kind() == TaggerKind::kCrf ? ViterbiCrf(crf(), phrase)
                                    : ViterbiHmm(hmm(), phrase);
}

std::vector<std::vector<double>> Tagger::Posteriors(const Phrase& phrase) const {
  return kind() == TaggerKind::kCrf ? Marginals(crf(), phrase).node
                                    : HmmPosteriors(hmm(), phrase);
}

Corpus Tagger::TagCorpus(const Corpus& corpus) const {
  std::vector<TaggedPhrase> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Phrase& phrase = corpus.PhraseAt(i);
    out.push_back({phrase, Decode(phrase).tags});
  }
  return Corpus::Tagged(std::move(out), tagset(), corpus.config());
}

}  // namespace cuneilab
