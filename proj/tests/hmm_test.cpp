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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/hmm.hpp"
#include "support/oracle.hpp"

namespace cuneilab {
namespace {

Corpus Toy(const std::vector<std::vector<std::pair<std::string, std::string>>>& rows,
           const TagSet& tags) {
  std::vector<TaggedPhrase> out;
  for (const auto& row : rows) {
    TaggedPhrase tp;
    std::vector<std::string> words;
    for (const auto& [w, t] : row) {
      words.push_back(w);
      tp.tags.push_back(*tags.IndexOf(t));
    }
    tp.phrase = MakePhrase(words);
    out.push_back(tp);
  }
  return Corpus::Tagged(out, tags);
}

TEST(TrainHmm, ForcedCounts) {
  const TagSet& pos = TagSet::Pos();
  const int n = *pos.IndexOf("N");
  HmmModel m = TrainHmm(Toy({{{"a", "N"}}}, pos), 0.0);
  EXPECT_NEAR(std::exp(m.LogInitial(n)), 1.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogEmission(n, TokenizeSigns("a"))), 1.0, 1e-12);
}

TEST(TrainHmm, SymmetricInitial) {
  const TagSet& pos = TagSet::Pos();
  HmmModel m = TrainHmm(Toy({{{"a", "N"}}, {{"a", "V"}}}, pos), 0.0);
  EXPECT_NEAR(std::exp(m.LogInitial(*pos.IndexOf("N"))), 0.5, 1e-12);
  EXPECT_NEAR(std::exp(m.LogInitial(*pos.IndexOf("V"))), 0.5, 1e-12);
}

TEST(TrainHmm, AddOneTablesByHand) {
  TagSet ab = oracle::SmallTagSet(2);
  // A A B / B A / A
  Corpus c = Toy({{{"x", "A"}, {"x", "A"}, {"y", "B"}}, {{"y", "B"}, {"x", "A"}}, {{"z", "A"}}},
                 ab);
  HmmModel m = TrainHmm(c, 1.0);
  // initial: A twice, B once; (2+1)/(3+2), (1+1)/(3+2)
  EXPECT_NEAR(std::exp(m.LogInitial(0)), 3.0 / 5.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogInitial(1)), 2.0 / 5.0, 1e-12);
  // transitions from A: A->A 1, A->B 1; from B: B->A 1
  EXPECT_NEAR(std::exp(m.LogTransition(0, 0)), 2.0 / 4.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogTransition(0, 1)), 2.0 / 4.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogTransition(1, 0)), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogTransition(1, 1)), 1.0 / 3.0, 1e-12);
  // emissions, vocab {x,y,z} + UNK = 4 outcomes; A emits x x x z (4), B emits y y (2)
  auto e = [&](int t, const char* w) { return std::exp(m.LogEmission(t, TokenizeSigns(w))); };
  EXPECT_NEAR(e(0, "x"), 4.0 / 8.0, 1e-12);
  EXPECT_NEAR(e(0, "z"), 2.0 / 8.0, 1e-12);
  EXPECT_NEAR(e(0, "y"), 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(e(0, "never-seen"), 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(e(1, "y"), 3.0 / 6.0, 1e-12);
  EXPECT_NEAR(e(1, "never-seen"), 1.0 / 6.0, 1e-12);
}

TEST(TrainHmm, Errors) {
  try {
    TrainHmm(Corpus::Tagged({}, TagSet::Pos()), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

HmmModel TextbookModel() {
  HmmModel m;
  m.tagset = oracle::SmallTagSet(2);
  m.log_initial = {std::log(0.6), std::log(0.4)};
  m.log_transition = {{std::log(0.7), std::log(0.3)}, {std::log(0.4), std::log(0.6)}};
  m.log_emission = {{{"x", std::log(0.9)}, {"y", std::log(0.1)}},
                    {{"x", std::log(0.2)}, {"y", std::log(0.8)}}};
  m.log_emission_floor = {-INFINITY, -INFINITY};
  m.vocab = {"x", "y"};
  return m;
}

TEST(ViterbiHmm, SingleStep) {
  TagPath p = ViterbiHmm(TextbookModel(), MakePhrase("x"));
  EXPECT_EQ(p.tags, std::vector<int>{0});
  EXPECT_NEAR(p.score, std::log(0.54), 1e-12);
}

TEST(ViterbiHmm, TwoStepsByEnumeration) {
  TagPath p = ViterbiHmm(TextbookModel(), MakePhrase("x y"));
  EXPECT_EQ(p.tags, (std::vector<int>{0, 1}));
  EXPECT_NEAR(std::exp(p.score), 0.1296, 1e-12);
  EXPECT_NEAR(SequenceLogLikelihood(TextbookModel(), MakePhrase("x y")),
              std::log(0.2090), 1e-12);
}

TEST(ViterbiHmm, MatchesEnumeration) {
  Rng rng(1234);
  const auto vocab = oracle::ToyVocab(5);
  for (int trial = 0; trial < 200; ++trial) {
    HmmModel m = oracle::RandomHmm(rng, 2 + rng.Below(3), vocab);
    Phrase p = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(6));
    auto e = oracle::EnumerateHmm(m, p);
    TagPath v = ViterbiHmm(m, p);
    EXPECT_TRUE(oracle::Contains(e.near_best, v.tags));
    if (e.near_best.size() == 1) EXPECT_EQ(v.tags, e.best);
    EXPECT_NEAR(v.score, e.best_score, 1e-9);
    const double ll = SequenceLogLikelihood(m, p);
    EXPECT_NEAR(ll, e.log_likelihood, 1e-9);
    EXPECT_GE(ll + 1e-12, v.score);
  }
}

TEST(ViterbiHmm, TiesGoToLowestIndex) {
  HmmModel m;
  m.tagset = oracle::SmallTagSet(3);
  m.log_initial.assign(3, std::log(1.0 / 3));
  m.log_transition.assign(3, std::vector<double>(3, std::log(1.0 / 3)));
  m.log_emission.assign(3, {{"x", std::log(0.5)}});
  m.log_emission_floor.assign(3, std::log(0.5));
  EXPECT_EQ(ViterbiHmm(m, MakePhrase("x x x")).tags, (std::vector<int>{0, 0, 0}));
}

TEST(HmmModel, NormalizationAndSmoothingMonotone) {
  TagSet ab = oracle::SmallTagSet(2);
  Corpus c = Toy({{{"x", "A"}, {"y", "B"}}, {{"x", "A"}, {"x", "A"}}}, ab);
  double prev_unk_a = -INFINITY;
  for (double k : {0.1, 0.5, 1.0, 2.0}) {
    HmmModel m = TrainHmm(c, k);
    double init = 0.0;
    for (int t = 0; t < 2; ++t) init += std::exp(m.LogInitial(t));
    EXPECT_NEAR(init, 1.0, 1e-9);
    for (int a = 0; a < 2; ++a) {
      double row = 0.0;
      for (int b = 0; b < 2; ++b) row += std::exp(m.LogTransition(a, b));
      EXPECT_NEAR(row, 1.0, 1e-9);
      double em = std::exp(m.log_emission_floor[a]);
      for (const auto& w : m.vocab) em += std::exp(m.LogEmission(a, TokenizeSigns(w)));
      EXPECT_NEAR(em, 1.0, 1e-9);
    }
    const double unk = m.LogEmission(0, TokenizeSigns("zz"));
    EXPECT_GT(unk, prev_unk_a);
    prev_unk_a = unk;
  }
}

TEST(HmmModel, PosteriorsNormalize) {
  Rng rng(4);
  const auto vocab = oracle::ToyVocab(4);
  HmmModel m = oracle::RandomHmm(rng, 3, vocab);
  auto post = HmmPosteriors(m, oracle::RandomPhrase(rng, vocab, 5));
  for (const auto& row : post) {
    double s = 0.0;
    for (double p : row) s += p;
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(HmmFile, RoundTrip) {
  HmmModel m = TrainHmm(Toy({{{"ku3", "N"}, {"gin", "V"}}, {{"ur-{d}x", "NE"}}},
                            TagSet::Pos()),
                        0.3);
  std::ostringstream out;
  WriteHmm(m, out);
  EXPECT_EQ(out.str().rfind("#cuneilab-hmm v1", 0), 0u);
  std::istringstream in(out.str());
  HmmModel back = ReadHmm(in);
  std::ostringstream again;
  WriteHmm(back, again);
  EXPECT_EQ(out.str(), again.str());
  Phrase p = MakePhrase("ku3 gin ur-{d}x zz");
  EXPECT_EQ(ViterbiHmm(back, p).tags, ViterbiHmm(m, p).tags);
  EXPECT_DOUBLE_EQ(ViterbiHmm(back, p).score, ViterbiHmm(m, p).score);
}

}  // namespace
}  // namespace cuneilab
