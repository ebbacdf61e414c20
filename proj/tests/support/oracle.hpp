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

// Brute-force reference computations shared by the unit and acceptance
// tests. Nothing here calls the lattice, Viterbi or forward-backward code;
// path scores are rebuilt from raw feature ids and weights.

#ifndef CUNEILAB_TESTS_ORACLE_HPP_
#define CUNEILAB_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

#include "cuneilab/corpus.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/hmm.hpp"
#include "cuneilab/random.hpp"

namespace cuneilab::oracle {

// Calls fn(path) for every tag sequence of length n over t tags, in
// lexicographic order (so the first maximum seen is the lowest-index one).
template <typename Fn>
void ForEachPath(std::size_t n, std::size_t t, Fn&& fn) {
  std::vector<int> path(n, 0);
  while (true) {
    fn(path);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(++path[i]) < t) break;
      path[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

inline double LogSumExp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Score of a CRF path straight from weights.
inline double CrfPathScore(const CrfModel& model, const Phrase& phrase,
                           const std::vector<int>& tags) {
  const auto& w = model.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    for (int f : model.Features(phrase, i)) s += w[model.StateIndex(f, tags[i])];
    if (i > 0 && model.has_transitions()) {
      s += w[model.TransitionIndex(tags[i - 1], tags[i])];
    }
  }
  return s;
}

// Paths scoring within kTieTolerance of the maximum; structurally tied paths
// (repeated words) may differ from each other by rounding only.
constexpr double kTieTolerance = 1e-9;

inline std::vector<std::vector<int>> NearBest(const std::vector<std::vector<int>>& paths,
                                              const std::vector<double>& scores,
                                              double best) {
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (scores[k] >= best - kTieTolerance) out.push_back(paths[k]);
  }
  return out;
}

inline bool Contains(const std::vector<std::vector<int>>& set, const std::vector<int>& p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

struct Enumerated {
  std::vector<int> best;
  std::vector<std::vector<int>> near_best;
  double best_score = -std::numeric_limits<double>::infinity();
  double log_z = 0.0;
  std::vector<std::vector<double>> node;               // [i][t]
  std::vector<std::vector<std::vector<double>>> edge;  // [i][a][b]
};

inline Enumerated EnumerateCrf(const CrfModel& model, const Phrase& phrase) {
  const std::size_t n = phrase.size();
  const std::size_t t = model.num_tags();
  Enumerated e;
  std::vector<std::vector<int>> paths;
  std::vector<double> scores;
  ForEachPath(n, t, [&](const std::vector<int>& p) {
    const double s = CrfPathScore(model, phrase, p);
    if (s > e.best_score) {
      e.best_score = s;
      e.best = p;
    }
    paths.push_back(p);
    scores.push_back(s);
  });
  e.log_z = LogSumExp(scores);
  e.near_best = NearBest(paths, scores, e.best_score);
  e.node.assign(n, std::vector<double>(t, 0.0));
  e.edge.assign(n > 0 ? n - 1 : 0,
                std::vector<std::vector<double>>(t, std::vector<double>(t, 0.0)));
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const double p = std::exp(scores[k] - e.log_z);
    for (std::size_t i = 0; i < n; ++i) {
      e.node[i][paths[k][i]] += p;
      if (i + 1 < n) e.edge[i][paths[k][i]][paths[k][i + 1]] += p;
    }
  }
  return e;
}

inline double HmmJointLog(const HmmModel& model, const Phrase& phrase,
                          const std::vector<int>& tags) {
  double s = model.LogInitial(tags[0]) + model.LogEmission(tags[0], phrase.tokens[0]);
  for (std::size_t i = 1; i < phrase.size(); ++i) {
    s += model.LogTransition(tags[i - 1], tags[i]) +
         model.LogEmission(tags[i], phrase.tokens[i]);
  }
  return s;
}

struct HmmEnumerated {
  std::vector<int> best;
  std::vector<std::vector<int>> near_best;
  double best_score = -std::numeric_limits<double>::infinity();
  double log_likelihood = 0.0;
};

inline HmmEnumerated EnumerateHmm(const HmmModel& model, const Phrase& phrase) {
  HmmEnumerated e;
  std::vector<std::vector<int>> paths;
  std::vector<double> scores;
  ForEachPath(phrase.size(), model.tagset.size(), [&](const std::vector<int>& p) {
    const double s = HmmJointLog(model, phrase, p);
    if (s > e.best_score) {
      e.best_score = s;
      e.best = p;
    }
    paths.push_back(p);
    scores.push_back(s);
  });
  e.log_likelihood = LogSumExp(scores);
  e.near_best = NearBest(paths, scores, e.best_score);
  return e;
}

inline TagSet SmallTagSet(std::size_t t) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < t; ++i) labels.push_back(std::string(1, char('A' + i)));
  return TagSet::Custom("toy" + std::to_string(t), labels);
}

inline std::vector<std::string> ToyVocab(std::size_t v) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

inline Phrase RandomPhrase(Rng& rng, const std::vector<std::string>& vocab,
                           std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back(rng.Pick(vocab));
  return MakePhrase(words, "p");
}

// CRF over word/prev/next identity with transitions and Gaussian weights.
inline CrfModel RandomCrf(Rng& rng, std::size_t tags,
                          const std::vector<std::string>& vocab,
                          double scale = 1.0) {
  std::vector<FeatureTemplate> templates = {
      {TemplateKind::kBias, 0},
      {TemplateKind::kWordIdentity, 0},
      {TemplateKind::kPrevWordIdentity, 0},
      {TemplateKind::kNextWordIdentity, 0},
      {TemplateKind::kTagBigram, 0},
  };
  FeatureDictionary dict;
  dict.Intern("b");
  dict.Intern("pw=<s>");
  dict.Intern("nw=</s>");
  for (const auto& w : vocab) {
    dict.Intern("w=" + w);
    dict.Intern("pw=" + w);
    dict.Intern("nw=" + w);
  }
  CrfModel model(SmallTagSet(tags), templates, RuleSet{}, std::move(dict), 10.0);
  for (double& w : model.mutable_weights()) w = scale * (2.0 * rng.Unit() - 1.0);
  return model;
}

inline std::vector<double> RandomDistribution(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) {
    x = 0.05 + rng.Unit();
    s += x;
  }
  for (double& x : p) x /= s;
  return p;
}

// HMM with explicit random tables; every vocab word gets a seen emission.
inline HmmModel RandomHmm(Rng& rng, std::size_t tags,
                          const std::vector<std::string>& vocab) {
  HmmModel m;
  m.tagset = SmallTagSet(tags);
  m.smoothing_k = 1.0;
  for (double p : RandomDistribution(rng, tags)) m.log_initial.push_back(std::log(p));
  m.log_transition.assign(tags, {});
  m.log_emission.assign(tags, {});
  m.log_emission_floor.assign(tags, 0.0);
  for (const auto& w : vocab) m.vocab.insert(w);
  for (std::size_t a = 0; a < tags; ++a) {
    for (double p : RandomDistribution(rng, tags)) {
      m.log_transition[a].push_back(std::log(p));
    }
    auto e = RandomDistribution(rng, vocab.size() + 1);
    for (std::size_t v = 0; v < vocab.size(); ++v) {
      m.log_emission[a][vocab[v]] = std::log(e[v]);
    }
    m.log_emission_floor[a] = std::log(e.back());
  }
  return m;
}

// The two-token worked example: state(x,A)=1, state(y,B)=1, trans(A,B)=0.5.
inline CrfModel WorkedExampleCrf() {
  std::vector<FeatureTemplate> templates = {{TemplateKind::kWordIdentity, 0},
                                            {TemplateKind::kTagBigram, 0}};
  FeatureDictionary dict;
  const int x = dict.Intern("w=x");
  const int y = dict.Intern("w=y");
  CrfModel model(SmallTagSet(2), templates, RuleSet{}, std::move(dict), 10.0);
  auto& w = model.mutable_weights();
  w[model.StateIndex(x, 0)] = 1.0;
  w[model.StateIndex(y, 1)] = 1.0;
  w[model.TransitionIndex(0, 1)] = 0.5;
  return model;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("cuneilab-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cuneilab::oracle

#endif  // CUNEILAB_TESTS_ORACLE_HPP_
