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

#include "cuneilab/hmm.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cuneilab/error.hpp"
#include "log_math.hpp"
#include "text_util.hpp"

namespace cuneilab {

using internal::kNegInf;

namespace {

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

double HmmModel::LogEmission(int tag, const Token& token) const {
  if (IsMask(token)) return 0.0;
  const auto& row = log_emission[tag];
  auto it = row.find(token.surface);
  return it != row.end() ? it->second : log_emission_floor[tag];
}

HmmModel TrainHmm(const Corpus& corpus, double smoothing_k) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot train on an empty corpus");
  }
  if (!(smoothing_k >= 0.0) || !std::isfinite(smoothing_k)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing k must be >= 0");
  }
  const TagSet& tagset = corpus.tagset();
  const std::size_t num_tags = tagset.size();
  const double k = smoothing_k;

  std::vector<double> initial(num_tags, 0.0);
  std::vector<std::vector<double>> transition(num_tags,
                                              std::vector<double>(num_tags, 0.0));
  std::vector<std::map<std::string, double>> emission(num_tags);
  std::vector<double> tag_count(num_tags, 0.0);

  HmmModel model;
  model.tagset = tagset;
  model.smoothing_k = k;

  for (const TaggedPhrase& tp : corpus.tagged()) {
    for (std::size_t i = 0; i < tp.tags.size(); ++i) {
      int tag = tp.tags[i];
      if (tag < 0 || static_cast<std::size_t>(tag) >= num_tags) {
        throw Error(ErrorCode::kTagOutsideTagset,
                    "tag index " + std::to_string(tag));
      }
      const std::string& word = tp.phrase.tokens[i].surface;
      model.vocab.insert(word);
      emission[tag][word] += 1.0;
      tag_count[tag] += 1.0;
      if (i == 0) {
        initial[tag] += 1.0;
      } else {
        transition[tp.tags[i - 1]][tag] += 1.0;
      }
    }
  }

  const double n_phrases = static_cast<double>(corpus.size());
  const double t = static_cast<double>(num_tags);
  const double outcomes = static_cast<double>(model.vocab.size()) + 1.0;

  model.log_initial.resize(num_tags);
  for (std::size_t a = 0; a < num_tags; ++a) {
    model.log_initial[a] = SafeLog((initial[a] + k) / (n_phrases + k * t));
  }

  model.log_transition.assign(num_tags, std::vector<double>(num_tags));
  for (std::size_t a = 0; a < num_tags; ++a) {
    double total = 0.0;
    for (double c : transition[a]) total += c;
    double denom = total + k * t;
    for (std::size_t b = 0; b < num_tags; ++b) {
      model.log_transition[a][b] =
          denom > 0.0 ? SafeLog((transition[a][b] + k) / denom) : -std::log(t);
    }
  }

  model.log_emission.resize(num_tags);
  model.log_emission_floor.resize(num_tags);
  for (std::size_t a = 0; a < num_tags; ++a) {
    double denom = tag_count[a] + k * outcomes;
    if (denom <= 0.0) {
      model.log_emission_floor[a] = -std::log(outcomes);
      continue;
    }
    model.log_emission_floor[a] = SafeLog(k / denom);
    for (const auto& [word, count] : emission[a]) {
      model.log_emission[a][word] = std::log((count + k) / denom);
    }
  }
  return model;
}

TagPath ViterbiHmm(const HmmModel& model, const Phrase& phrase) {
  const std::size_t n = phrase.tokens.size();
  const int num_tags = static_cast<int>(model.tagset.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty phrase");

  std::vector<std::vector<double>> delta(n, std::vector<double>(num_tags));
  std::vector<std::vector<int>> back(n, std::vector<int>(num_tags, 0));
  for (int a = 0; a < num_tags; ++a) {
    delta[0][a] = model.LogInitial(a) + model.LogEmission(a, phrase.tokens[0]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (int b = 0; b < num_tags; ++b) {
      double best = kNegInf;
      int arg = 0;
      for (int a = 0; a < num_tags; ++a) {
        double cand = delta[i - 1][a] + model.LogTransition(a, b);
        if (cand > best) {
          best = cand;
          arg = a;
        }
      }
      delta[i][b] = best + model.LogEmission(b, phrase.tokens[i]);
      back[i][b] = arg;
    }
  }
  TagPath path;
  path.tags.assign(n, 0);
  double best = kNegInf;
  int arg = 0;
  for (int a = 0; a < num_tags; ++a) {
    if (delta[n - 1][a] > best) {
      best = delta[n - 1][a];
      arg = a;
    }
  }
  path.score = delta[n - 1][arg];
  path.tags[n - 1] = arg;
  for (std::size_t i = n - 1; i > 0; --i) {
    path.tags[i - 1] = back[i][path.tags[i]];
  }
  return path;
}

namespace {

std::vector<std::vector<double>> Forward(const HmmModel& model,
                                         const Phrase& phrase) {
  const std::size_t n = phrase.tokens.size();
  const int num_tags = static_cast<int>(model.tagset.size());
  std::vector<std::vector<double>> alpha(n, std::vector<double>(num_tags));
  std::vector<double> scratch(num_tags);
  for (int a = 0; a < num_tags; ++a) {
    alpha[0][a] = model.LogInitial(a) + model.LogEmission(a, phrase.tokens[0]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (int b = 0; b < num_tags; ++b) {
      for (int a = 0; a < num_tags; ++a) {
        scratch[a] = alpha[i - 1][a] + model.LogTransition(a, b);
      }
      alpha[i][b] =
          internal::LogSumExp(scratch) + model.LogEmission(b, phrase.tokens[i]);
    }
  }
  return alpha;
}

}  // namespace

double SequenceLogLikelihood(const HmmModel& model, const Phrase& phrase) {
  if (phrase.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty phrase");
  }
  return internal::LogSumExp(Forward(model, phrase).back());
}

std::vector<std::vector<double>> HmmPosteriors(const HmmModel& model,
                                               const Phrase& phrase) {
  const std::size_t n = phrase.tokens.size();
  const int num_tags = static_cast<int>(model.tagset.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty phrase");
  auto alpha = Forward(model, phrase);
  std::vector<std::vector<double>> beta(n, std::vector<double>(num_tags, 0.0));
  std::vector<double> scratch(num_tags);
  for (std::size_t i = n - 1; i > 0; --i) {
    for (int a = 0; a < num_tags; ++a) {
      for (int b = 0; b < num_tags; ++b) {
        scratch[b] = model.LogTransition(a, b) +
                     model.LogEmission(b, phrase.tokens[i]) + beta[i][b];
      }
      beta[i - 1][a] = internal::LogSumExp(scratch);
    }
  }
  const double log_z = internal::LogSumExp(alpha[n - 1]);
  std::vector<std::vector<double>> post(n, std::vector<double>(num_tags));
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < num_tags; ++a) {
      post[i][a] = log_z == kNegInf ? 1.0 / num_tags
                                    : std::exp(alpha[i][a] + beta[i][a] - log_z);
    }
  }
  return post;
}

// --- Serialization ------------------------------------------------------

namespace {

constexpr std::string_view kHmmMagic = "#cuneilab-hmm";

}  // namespace

void WriteHmm(const HmmModel& model, std::ostream& out) {
  using internal::FormatDouble;
  const auto& labels = model.tagset.labels();
  out << kHmmMagic << " v1\n";
  out << "tagset\t" << model.tagset.name() << '\n';
  out << "labels\t" << internal::Join(labels, "\t") << '\n';
  out << "smoothing_k\t" << FormatDouble(model.smoothing_k) << '\n';
  out << "vocab\t" << model.vocab.size() << '\n';
  for (const auto& w : model.vocab) out << "w\t" << w << '\n';
  for (std::size_t a = 0; a < labels.size(); ++a) {
    out << "initial\t" << labels[a] << '\t' << FormatDouble(model.log_initial[a])
        << '\n';
  }
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      out << "transition\t" << labels[a] << '\t' << labels[b] << '\t'
          << FormatDouble(model.log_transition[a][b]) << '\n';
    }
  }
  for (std::size_t a = 0; a < labels.size(); ++a) {
    out << "floor\t" << labels[a] << '\t'
        << FormatDouble(model.log_emission_floor[a]) << '\n';
    for (const auto& [word, lp] : model.log_emission[a]) {
      out << "emission\t" << labels[a] << '\t' << word << '\t'
          << FormatDouble(lp) << '\n';
    }
  }
}

HmmModel ReadHmm(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kBadMagic, "empty file", 1, source);
  }
  auto header = internal::SplitWhitespace(line);
  if (header.empty() || header[0] != kHmmMagic) {
    throw Error(ErrorCode::kBadMagic, "missing HMM header", 1, source);
  }
  if (header.size() != 2 || header[1] != "v1") {
    throw Error(ErrorCode::kUnsupportedVersion, line, 1, source);
  }

  HmmModel model;
  std::string tagset_name;
  bool have_labels = false;
  std::size_t num_tags = 0;
  auto tag_of = [&](const std::string& label) {
    auto idx = model.tagset.IndexOf(label);
    if (!have_labels || !idx) {
      throw Error(ErrorCode::kUnknownLabel, "'" + label + "'", line_no, source);
    }
    return static_cast<std::size_t>(*idx);
  };
  auto expect = [&](const std::vector<std::string>& f, std::size_t n) {
    if (f.size() != n) {
      throw Error(ErrorCode::kMalformedLine, "wrong field count", line_no,
                  source);
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = internal::Split(line, '\t');
    const std::string& key = f[0];
    if (key == "tagset") {
      expect(f, 2);
      tagset_name = f[1];
    } else if (key == "labels") {
      if (f.size() < 2) expect(f, 2);
      std::vector<std::string> labels(f.begin() + 1, f.end());
      model.tagset = TagSet::Custom(tagset_name, labels);
      if (model.tagset.labels() == TagSet::Pos().labels()) {
        model.tagset = TagSet::Pos();
      } else if (model.tagset.labels() == TagSet::Ner().labels()) {
        model.tagset = TagSet::Ner();
      }
      have_labels = true;
      num_tags = labels.size();
      model.log_initial.assign(num_tags, kNegInf);
      model.log_transition.assign(num_tags,
                                  std::vector<double>(num_tags, kNegInf));
      model.log_emission.assign(num_tags, {});
      model.log_emission_floor.assign(num_tags, kNegInf);
    } else if (key == "smoothing_k") {
      expect(f, 2);
      model.smoothing_k = internal::ParseDouble(f[1], line_no, source);
    } else if (key == "vocab") {
      expect(f, 2);
    } else if (key == "w") {
      expect(f, 2);
      model.vocab.insert(f[1]);
    } else if (key == "initial") {
      expect(f, 3);
      model.log_initial[tag_of(f[1])] =
          internal::ParseDouble(f[2], line_no, source);
    } else if (key == "transition") {
      expect(f, 4);
      model.log_transition[tag_of(f[1])][tag_of(f[2])] =
          internal::ParseDouble(f[3], line_no, source);
    } else if (key == "floor") {
      expect(f, 3);
      model.log_emission_floor[tag_of(f[1])] =
          internal::ParseDouble(f[2], line_no, source);
    } else if (key == "emission") {
      expect(f, 4);
      model.log_emission[tag_of(f[1])][f[2]] =
          internal::ParseDouble(f[3], line_no, source);
    } else {
      throw Error(ErrorCode::kMalformedLine, "unknown record '" + key + "'",
                  line_no, source);
    }
  }
  if (!have_labels) {
    throw Error(ErrorCode::kMalformedLine, "model has no labels", line_no,
                source);
  }
  return model;
}

void SaveHmm(const HmmModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteHmm(model, out);
  internal::WriteFile(path, out.str());
}

HmmModel LoadHmm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for reading", 0,
                path.string());
  }
  return ReadHmm(in, path.string());
}

}  // namespace cuneilab
