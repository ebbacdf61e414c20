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
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/interpret.hpp"
#include "cuneilab/tagger.hpp"
#include "support/oracle.hpp"

#ifndef CUNEILAB_GOLDEN_DIR
#define CUNEILAB_GOLDEN_DIR "tests/golden"
#endif

namespace cuneilab {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

// score = sum of weights of unmasked tokens.
class Additive : public ScoredModel {
 public:
  explicit Additive(std::vector<double> w) : w_(std::move(w)) {}
  double Score(const Phrase&, const std::vector<std::size_t>& masked,
               const Target&) const override {
    std::set<std::size_t> m(masked.begin(), masked.end());
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!m.count(i)) s += w_[i];
    }
    return s;
  }

 private:
  std::vector<double> w_;
};

// Tokens 0 and 1 interact symmetrically; token 3 is ignored entirely.
class Interacting : public ScoredModel {
 public:
  double Score(const Phrase&, const std::vector<std::size_t>& masked,
               const Target&) const override {
    std::set<std::size_t> m(masked.begin(), masked.end());
    const double a = m.count(0) ? 0.0 : 1.0;
    const double b = m.count(1) ? 0.0 : 1.0;
    const double c = m.count(2) ? 0.0 : 1.0;
    const double e = m.count(4) ? 0.0 : 1.0;
    return 0.3 * a * b + 0.2 * (a + b) * c - 0.4 * c * e + 0.1 * e + 0.05;
  }
};

class Scaled : public ScoredModel {
 public:
  Scaled(const ScoredModel& base, double k) : base_(base), k_(k) {}
  double Score(const Phrase& p, const std::vector<std::size_t>& m,
               const Target& t) const override {
    return k_ * base_.Score(p, m, t);
  }

 private:
  const ScoredModel& base_;
  double k_;
};

const Target kTarget{0, "A"};

TEST(Shapley, AdditiveModelRecoversContributions) {
  Additive model({0.5, -0.25, 1.0, 0.0});
  Phrase p = MakePhrase("a b c d", "1");
  AttributionMap exact = ShapleyExact(model, p, kTarget);
  AttributionMap occl = Occlusion(model, p, kTarget);
  const std::vector<double> expected = {0.5, -0.25, 1.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(exact.scores[i], expected[i], 1e-12);
    EXPECT_NEAR(occl.scores[i], exact.scores[i], 1e-12);
  }
}

TEST(Shapley, AxiomsOnInteractingModel) {
  Interacting model;
  Phrase p = MakePhrase("a b c d e", "1");
  for (int threads : {1, 3}) {
    AttributionMap m = ShapleyExact(model, p, kTarget, threads);
    double sum = 0.0;
    for (double s : m.scores) sum += s;
    const double full = model.Score(p, {}, kTarget);
    const double empty = model.Score(p, {0, 1, 2, 3, 4}, kTarget);
    EXPECT_NEAR(sum, full - empty, 1e-9);
    EXPECT_NEAR(m.scores[0], m.scores[1], 1e-9);
    EXPECT_NEAR(m.scores[3], 0.0, 1e-9);
    EXPECT_NEAR(Occlusion(model, p, kTarget).scores[3], 0.0, 1e-12);
  }
  EXPECT_EQ(ShapleyExact(model, p, kTarget, 1), ShapleyExact(model, p, kTarget, 4));
}

TEST(Shapley, ScalingScalesAttributions) {
  Interacting model;
  Scaled twice(model, 2.5);
  Phrase p = MakePhrase("a b c d e", "1");
  AttributionMap a = ShapleyExact(model, p, kTarget);
  AttributionMap b = ShapleyExact(twice, p, kTarget);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(b.scores[i], 2.5 * a.scores[i], 1e-12);
}

TEST(Shapley, TooManyTokens) {
  Additive model(std::vector<double>(13, 0.1));
  Phrase p = MakePhrase("a b c d e f g h i j k l m", "1");
  EXPECT_EQ(CodeOf([&] { ShapleyExact(model, p, kTarget); }),
            ErrorCode::kTooManyTokensForExact);
  EXPECT_NO_THROW(ShapleySampled(model, p, kTarget, 50, 1));
}

TEST(Shapley, SampledIsDeterministicAndClose) {
  Interacting model;
  Phrase p = MakePhrase("a b c d e", "1");
  AttributionMap s1 = ShapleySampled(model, p, kTarget, 2000, 7);
  AttributionMap s2 = ShapleySampled(model, p, kTarget, 2000, 7);
  EXPECT_EQ(s1, s2);
  AttributionMap exact = ShapleyExact(model, p, kTarget);
  double max_abs = 0.0;
  for (double v : exact.scores) max_abs = std::max(max_abs, std::abs(v));
  double mae = 0.0;
  for (std::size_t i = 0; i < 5; ++i) mae += std::abs(s1.scores[i] - exact.scores[i]);
  EXPECT_LE(mae / 5 / max_abs, 0.02);
}

// Tagger over word identity only, so an out-of-vocabulary token fires nothing.
Tagger WordOnlyTagger(Rng& rng, const std::vector<std::string>& vocab) {
  std::vector<FeatureTemplate> templates = {{TemplateKind::kWordIdentity, 0},
                                            {TemplateKind::kTagBigram, 0}};
  FeatureDictionary dict;
  for (const auto& w : vocab) dict.Intern("w=" + w);
  CrfModel m(oracle::SmallTagSet(3), templates, RuleSet{}, std::move(dict), 10.0);
  for (double& w : m.mutable_weights()) w = 2 * rng.Unit() - 1;
  return Tagger(std::move(m));
}

TEST(Occlusion, MatchesEnumeratedPosterior) {
  Rng rng(55);
  const auto vocab = oracle::ToyVocab(4);
  for (int trial = 0; trial < 30; ++trial) {
    Tagger tagger(oracle::RandomCrf(rng, 2 + rng.Below(2), vocab));
    TaggerScorer scorer(tagger);
    Phrase p = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(5));
    p.id = "t";
    const std::size_t pos = rng.Below(p.size());
    Target target = PredictedTarget(tagger, p, pos);
    const int label = *tagger.tagset().IndexOf(target.label);
    AttributionMap map = Occlusion(scorer, p, target);
    const double base = oracle::EnumerateCrf(tagger.crf(), p).node[pos][label];
    EXPECT_NEAR(map.baseline_score, base, 1e-9);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double masked =
          oracle::EnumerateCrf(tagger.crf(), MaskTokens(p, {i})).node[pos][label];
      EXPECT_NEAR(map.scores[i], base - masked, 1e-9);
    }
  }
}

TEST(Occlusion, ZeroFeatureTokenGetsExactlyZero) {
  Rng rng(3);
  const auto vocab = oracle::ToyVocab(3);
  Tagger tagger = WordOnlyTagger(rng, vocab);
  TaggerScorer scorer(tagger);
  Phrase p = MakePhrase("w0 unseen w2", "1");
  AttributionMap map = Occlusion(scorer, p, PredictedTarget(tagger, p, 0));
  EXPECT_EQ(map.scores[1], 0.0);
  Phrase one = MakePhrase("w1", "1");
  Target t = PredictedTarget(tagger, one, 0);
  AttributionMap single = Occlusion(scorer, one, t);
  ASSERT_EQ(single.scores.size(), 1u);
  EXPECT_NEAR(single.scores[0], scorer.Score(one, {}, t) - scorer.Score(one, {0}, t), 1e-15);
}

TEST(LeaveOneOut, DeletesTokens) {
  Additive model({0.5, -0.25, 1.0});
  AttributionMap m = LeaveOneOut(model, MakePhrase("a b c", "1"), {1, "A"});
  ASSERT_EQ(m.scores.size(), 3u);
  EXPECT_EQ(m.method, AttributionMethod::kLeaveOneOut);
}

TEST(TaggerScorer, Errors) {
  Rng rng(1);
  Tagger tagger = WordOnlyTagger(rng, oracle::ToyVocab(2));
  TaggerScorer scorer(tagger);
  Phrase p = MakePhrase("w0 w1", "1");
  EXPECT_EQ(CodeOf([&] { scorer.Score(p, {}, {0, "ZZ"}); }), ErrorCode::kUnknownLabel);
  EXPECT_EQ(CodeOf([&] { scorer.Score(p, {}, {2, "A"}); }), ErrorCode::kIndexOutOfRange);
}

AttributionMap HandMap(std::vector<double> scores) {
  AttributionMap m;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < scores.size(); ++i) words.push_back("t" + std::to_string(i));
  m.phrase = MakePhrase(words, "1");
  m.target = {0, "N"};
  m.scores = std::move(scores);
  return m;
}

TEST(Plausibility, Examples) {
  EXPECT_DOUBLE_EQ(Plausibility(HandMap({0.5, -0.2, 0.5}), {"1", {0}}), 0.5);
  EXPECT_DOUBLE_EQ(Plausibility(HandMap({0.5, -0.2, 0.0}), {"1", {0}}), 1.0);
  EXPECT_DOUBLE_EQ(Plausibility(HandMap({0.5, 0.1}), {"1", {}}), 0.0);
  EXPECT_DOUBLE_EQ(Plausibility(HandMap({0.0, -0.1}), {"1", {0}}), 0.0);
  EXPECT_EQ(CodeOf([] { Plausibility(HandMap({0.5}), {"2", {0}}); }),
            ErrorCode::kPhraseMismatch);
  EXPECT_EQ(CodeOf([] { Plausibility(HandMap({0.5}), {"1", {3}}); }),
            ErrorCode::kPhraseMismatch);
  std::istringstream in("1\t0,2\n7\t1\n");
  auto masks = ReadAnnotationMasks(in);
  EXPECT_EQ(masks.at("1").annotated, (std::set<std::size_t>{0, 2}));
}

TEST(AttributionFile, RoundTrip) {
  Interacting model;
  AttributionMap m = ShapleySampled(model, MakePhrase("ur-{d}nanna b c d e", "9"),
                                    {2, "GN"}, 300, 4);
  AddSignOcclusion(model, m);
  std::ostringstream out;
  WriteAttribution(m, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadAttribution(in), m);
}

TEST(Render, ZeroAndExtremes) {
  std::string zero = Render(HandMap({0.0, 0.0}), RenderFormat::kHtml, Correctness::kUnknown);
  EXPECT_NE(zero.find("background:rgb(255,255,255)"), std::string::npos);
  EXPECT_EQ(zero.find("rgb(0,255,0)"), std::string::npos);
  std::string ext = Render(HandMap({1.0, -1.0}), RenderFormat::kHtml, Correctness::kCorrect);
  const auto green = ext.find("background:rgb(0,255,0)");
  const auto red = ext.find("background:rgb(255,0,0)");
  ASSERT_NE(green, std::string::npos);
  ASSERT_NE(red, std::string::npos);
  EXPECT_LT(green, red);
  EXPECT_EQ(ext.find("http"), std::string::npos);
  EXPECT_EQ(ext.find("<script"), std::string::npos);
  std::string ansi = Render(HandMap({1.0, -1.0}), RenderFormat::kAnsi, Correctness::kWrong);
  EXPECT_NE(ansi.find("\x1b[48;2;0;255;0m"), std::string::npos);
}

TEST(Render, GoldenFiveTokens) {
  AttributionMap m = HandMap({0.8, -0.4, 0.0, 0.2, -1.0});
  m.phrase = MakePhrase("ur-{d}nanna dumu lu2-gi <mu> e2&", "42");
  m.target = {0, "PN"};
  m.method = AttributionMethod::kShapleyExact;
  m.baseline_score = 0.875;
  const std::string html = Render(m, RenderFormat::kHtml, Correctness::kCorrect);
  const std::string path = std::string(CUNEILAB_GOLDEN_DIR) + "/render_5tok.html";
  if (std::getenv("CUNEILAB_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << html;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << path;
  std::ostringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(html, golden.str());
}

}  // namespace
}  // namespace cuneilab
