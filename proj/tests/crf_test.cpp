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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/metrics.hpp"
#include "cuneilab/rules.hpp"
#include "support/oracle.hpp"

namespace cuneilab {
namespace {

TEST(Features, DivineNameInventory) {
  auto fs = ExtractFeatureStrings(DefaultTemplates(), DefaultRules(),
                                  MakePhrase("ur-{d}asznan"), 0);
  auto has = [&](const std::string& f) {
    return std::find(fs.begin(), fs.end(), f) != fs.end();
  };
  EXPECT_TRUE(has("w=ur-{d}asznan"));
  EXPECT_TRUE(has("p1=u"));
  EXPECT_TRUE(has("p4=ur-{"));
  EXPECT_TRUE(has("x1=n"));
  EXPECT_TRUE(has("x4=znan"));
  EXPECT_TRUE(has("det"));
  EXPECT_TRUE(has("r=prefix-ur"));
  EXPECT_TRUE(has("r=contains-d-pn"));
  EXPECT_TRUE(has("r=contains-d-dn"));
  EXPECT_TRUE(has("s[0]=asznan"));
  EXPECT_TRUE(has("s[0]={d}"));
  EXPECT_TRUE(has("pw=<s>"));
  EXPECT_TRUE(has("nw=</s>"));
}

TEST(Features, EmptyTemplatesAndIdempotence) {
  EXPECT_TRUE(ExtractFeatureStrings({}, DefaultRules(), MakePhrase("a b"), 1).empty());
  Rng rng(2);
  const std::vector<std::string> vocab = {"ur-{d}nanna", "5(disz)", "gin", "mu",
                                          "nibru{ki}", "ba-hul", "x"};
  for (int i = 0; i < 500; ++i) {
    Phrase p = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(6));
    const std::size_t pos = rng.Below(p.size());
    EXPECT_EQ(ExtractFeatureStrings(DefaultTemplates(), DefaultRules(), p, pos),
              ExtractFeatureStrings(DefaultTemplates(), DefaultRules(), p, pos));
  }
  EXPECT_THROW(ExtractFeatureStrings(DefaultTemplates(), DefaultRules(), MakePhrase("a"), 1),
               Error);
}

TEST(Templates, NamesRoundTrip) {
  for (const auto& t : DefaultTemplates()) EXPECT_EQ(FeatureTemplate::Parse(t.Name()), t);
  EXPECT_THROW(FeatureTemplate::Parse("prefix:9"), Error);
}

TEST(WorkedExample, PartitionMarginalsViterbi) {
  CrfModel m = oracle::WorkedExampleCrf();
  Phrase xy = MakePhrase("x y");
  const double z = std::exp(1.0) + std::exp(2.5) + 1.0 + std::exp(1.0);
  EXPECT_NEAR(LogPartition(m, xy), std::log(z), 1e-12);
  EXPECT_NEAR(LogPartition(m, xy), 2.9242, 1e-4);
  CrfMarginals mg = Marginals(m, xy);
  EXPECT_NEAR(mg.log_z, mg.log_z_backward, 1e-12);
  EXPECT_NEAR(mg.node[0][0], (std::exp(1.0) + std::exp(2.5)) / z, 1e-12);
  EXPECT_NEAR(mg.node[0][0], 0.8003, 1e-4);
  EXPECT_NEAR(mg.edge[0][0][1], std::exp(2.5) / z, 1e-12);
  EXPECT_NEAR(mg.edge[0][0][1], 0.6543, 1e-4);
  TagPath v = ViterbiCrf(m, xy);
  EXPECT_EQ(v.tags, (std::vector<int>{0, 1}));
  EXPECT_NEAR(v.score, 2.5, 1e-12);
  EXPECT_NEAR(PathScore(m, xy, {0, 1}), 2.5, 1e-12);
}

TEST(ZeroWeights, UniformAndTieBreak) {
  Rng rng(1);
  const auto vocab = oracle::ToyVocab(3);
  CrfModel m = oracle::RandomCrf(rng, 4, vocab, 0.0);
  Phrase p = oracle::RandomPhrase(rng, vocab, 5);
  EXPECT_NEAR(LogPartition(m, p), 5 * std::log(4.0), 1e-12);
  for (const auto& row : Marginals(m, p).node) {
    for (double q : row) EXPECT_NEAR(q, 0.25, 1e-12);
  }
  EXPECT_EQ(ViterbiCrf(m, p).tags, std::vector<int>(5, 0));
}

TEST(Inference, MatchesEnumeration) {
  Rng rng(77);
  const auto vocab = oracle::ToyVocab(4);
  for (int trial = 0; trial < 200; ++trial) {
    CrfModel m = oracle::RandomCrf(rng, 2 + rng.Below(3), vocab, 2.0);
    Phrase p = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(6));
    auto e = oracle::EnumerateCrf(m, p);
    TagPath v = ViterbiCrf(m, p);
    EXPECT_TRUE(oracle::Contains(e.near_best, v.tags));
    if (e.near_best.size() == 1) EXPECT_EQ(v.tags, e.best);
    EXPECT_NEAR(v.score, e.best_score, 1e-9);
    CrfMarginals mg = Marginals(m, p);
    EXPECT_NEAR(mg.log_z, e.log_z, 1e-9);
    EXPECT_NEAR(mg.log_z, mg.log_z_backward, 1e-9);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double s = 0.0;
      for (std::size_t t = 0; t < m.num_tags(); ++t) {
        EXPECT_NEAR(mg.node[i][t], e.node[i][t], 1e-9);
        s += mg.node[i][t];
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      for (std::size_t a = 0; a < m.num_tags(); ++a) {
        double out = 0.0, in = 0.0;
        for (std::size_t b = 0; b < m.num_tags(); ++b) {
          out += mg.edge[i][a][b];
          in += mg.edge[i][b][a];
        }
        EXPECT_NEAR(out, mg.node[i][a], 1e-9);
        EXPECT_NEAR(in, mg.node[i + 1][a], 1e-9);
      }
    }
  }
}

TEST(Inference, ConstantShiftLeavesArgmax) {
  Rng rng(9);
  const auto vocab = oracle::ToyVocab(3);
  for (int trial = 0; trial < 50; ++trial) {
    CrfModel m = oracle::RandomCrf(rng, 3, vocab);
    Phrase p = oracle::RandomPhrase(rng, vocab, 4);
    TagPath before = ViterbiCrf(m, p);
    // Every token fires the bias feature, so shifting its weights for all
    // tags adds the same constant at every position.
    const int bias = *m.dictionary().Find("b");
    for (std::size_t t = 0; t < m.num_tags(); ++t) {
      m.mutable_weights()[m.StateIndex(bias, static_cast<int>(t))] += 0.7;
    }
    TagPath after = ViterbiCrf(m, p);
    EXPECT_EQ(after.tags, before.tags);
    EXPECT_NEAR(after.score, before.score + 0.7 * p.size(), 1e-9);
  }
}

std::vector<TaggedPhrase> RandomBatch(Rng& rng, const CrfModel& m,
                                      const std::vector<std::string>& vocab) {
  std::vector<TaggedPhrase> batch;
  for (std::size_t k = 0, n = 1 + rng.Below(3); k < n; ++k) {
    TaggedPhrase tp;
    tp.phrase = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(5));
    for (std::size_t i = 0; i < tp.phrase.size(); ++i) {
      tp.tags.push_back(static_cast<int>(rng.Below(m.num_tags())));
    }
    batch.push_back(tp);
  }
  return batch;
}

double Objective(const CrfModel& m, const std::vector<TaggedPhrase>& batch) {
  double nll = 0.0;
  for (const auto& tp : batch) {
    nll += oracle::EnumerateCrf(m, tp.phrase).log_z -
           oracle::CrfPathScore(m, tp.phrase, tp.tags);
  }
  double sq = 0.0;
  for (double w : m.weights()) sq += w * w;
  return nll + sq / (2.0 * m.l2_sigma2());
}

TEST(Objective, MatchesEnumerationAndTrivialCase) {
  Rng rng(31);
  const auto vocab = oracle::ToyVocab(3);
  CrfModel zero = oracle::RandomCrf(rng, 3, vocab, 0.0);
  NllResult r = NllAndGradient(zero, {{MakePhrase("w0"), {1}}});
  EXPECT_NEAR(r.nll, std::log(3.0), 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    CrfModel m = oracle::RandomCrf(rng, 3, vocab);
    auto batch = RandomBatch(rng, m, vocab);
    EXPECT_NEAR(NllAndGradient(m, batch).nll, Objective(m, batch), 1e-9);
  }
  EXPECT_THROW(NllAndGradient(zero, {{MakePhrase("w0 w1"), {1}}}), Error);
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  Rng rng(2024);
  const auto vocab = oracle::ToyVocab(3);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CrfModel m = oracle::RandomCrf(rng, 2 + rng.Below(2), vocab);
    auto batch = RandomBatch(rng, m, vocab);
    const auto grad = NllAndGradient(m, batch).gradient;
    for (std::size_t j = 0; j < m.num_weights(); ++j) {
      const double w = m.weights()[j];
      m.mutable_weights()[j] = w + h;
      const double up = NllAndGradient(m, batch).nll;
      m.mutable_weights()[j] = w - h;
      const double down = NllAndGradient(m, batch).nll;
      m.mutable_weights()[j] = w;
      const double fd = (up - down) / (2 * h);
      const double rel = std::abs(fd - grad[j]) / std::max(1.0, std::abs(fd) + std::abs(grad[j]));
      worst = std::max(worst, rel);
    }
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Objective, ApproachesZeroWithScale) {
  CrfModel m = oracle::WorkedExampleCrf();
  std::vector<TaggedPhrase> gold = {{MakePhrase("x y"), {0, 1}}};
  double prev = INFINITY;
  for (double scale : {1.0, 4.0, 16.0}) {
    CrfModel s = m;
    for (double& w : s.mutable_weights()) w *= scale;
    const double nll = NllAndGradient(s, gold).nll -
                       [&] {
                         double sq = 0.0;
                         for (double w : s.weights()) sq += w * w;
                         return sq / (2.0 * s.l2_sigma2());
                       }();
    EXPECT_GT(nll, 0.0);
    EXPECT_LT(nll, prev);
    prev = nll;
  }
  EXPECT_LT(prev, 1e-3);
}

Corpus Separable() {
  TagSet ab = oracle::SmallTagSet(2);
  std::vector<TaggedPhrase> data = {
      {MakePhrase("a b a"), {0, 1, 0}},
      {MakePhrase("b b"), {1, 1}},
      {MakePhrase("a"), {0}},
      {MakePhrase("b a b a"), {1, 0, 1, 0}},
  };
  return Corpus::Tagged(data, ab);
}

TEST(Training, SeparableReachesPerfectTrainingF1) {
  Corpus c = Separable();
  CrfTrainReport report;
  CrfModel m = TrainCrf(c, RuleSet{}, DefaultTemplates(), {}, &report);
  std::vector<TaggedPhrase> pred;
  for (const auto& tp : c.tagged()) pred.push_back({tp.phrase, ViterbiCrf(m, tp.phrase).tags});
  EXPECT_DOUBLE_EQ(Prf1(c.tagged(), pred, c.tagset(), Averaging::kWeighted).f1, 1.0);
  for (std::size_t i = 1; i < report.objective_trace.size(); ++i) {
    EXPECT_LE(report.objective_trace[i], report.objective_trace[i - 1] + 1e-12);
  }
}

TEST(Training, GradientDescentAgreesWithLbfgs) {
  Corpus c = Separable();
  const std::vector<FeatureTemplate> tmpl = {{TemplateKind::kWordIdentity, 0},
                                             {TemplateKind::kTagBigram, 0}};
  CrfTrainOptions gd;
  gd.optimizer = OptimizerKind::kGradientDescent;
  gd.max_iters = 5000;
  gd.grad_tol = 1e-7;
  CrfTrainOptions lb;
  lb.grad_tol = 1e-7;
  lb.max_iters = 1000;
  CrfTrainReport rg, rl;
  TrainCrf(c, RuleSet{}, tmpl, gd, &rg);
  TrainCrf(c, RuleSet{}, tmpl, lb, &rl);
  EXPECT_NEAR(rg.objective, rl.objective, 1e-5);
  for (std::size_t i = 1; i < rg.objective_trace.size(); ++i) {
    EXPECT_LE(rg.objective_trace[i], rg.objective_trace[i - 1] + 1e-12);
  }
}

// Tiny instance: 2 tags, word features only, no transitions. The objective
// separates per feature and is solved by 1-D Newton steps here.
TEST(Training, TinyInstanceMatchesNumericOptimum) {
  TagSet ab = oracle::SmallTagSet(2);
  std::vector<TaggedPhrase> data = {{MakePhrase("p q"), {0, 1}}, {MakePhrase("p"), {1}}};
  Corpus c = Corpus::Tagged(data, ab);
  const std::vector<FeatureTemplate> tmpl = {{TemplateKind::kWordIdentity, 0}};
  CrfTrainOptions opts;
  opts.grad_tol = 1e-9;
  opts.max_iters = 1000;
  CrfTrainReport report;
  CrfModel m = TrainCrf(c, RuleSet{}, tmpl, opts, &report);
  // Brute-force grid + refinement over the 4 weights (2 features x 2 tags).
  auto objective = [&](const std::vector<double>& w) {
    CrfModel probe = m;
    probe.mutable_weights() = w;
    return Objective(probe, data);
  };
  std::vector<double> best(m.num_weights(), 0.0);
  double best_value = objective(best);
  for (double step = 1.0; step > 1e-7; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < best.size(); ++j) {
        for (double d : {step, -step}) {
          auto trial = best;
          trial[j] += d;
          const double v = objective(trial);
          if (v < best_value) {
            best_value = v;
            best = trial;
            improved = true;
          }
        }
      }
    }
  }
  EXPECT_NEAR(report.objective, best_value, 1e-5);
}

TEST(Training, ConvexStartIndependence) {
  Corpus c = Separable();
  CrfTrainOptions a, b;
  a.grad_tol = b.grad_tol = 1e-7;
  a.max_iters = b.max_iters = 1000;
  b.random_init_seed = 42;
  CrfTrainReport ra, rb;
  TrainCrf(c, RuleSet{}, DefaultTemplates(), a, &ra);
  TrainCrf(c, RuleSet{}, DefaultTemplates(), b, &rb);
  EXPECT_NEAR(ra.objective, rb.objective, 1e-4);
}

TEST(Training, EmptyCorpus) {
  try {
    TrainCrf(Corpus::Tagged({}, TagSet::Pos()), RuleSet{}, DefaultTemplates());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(CrfFile, RoundTripReproducesTagsAndScores) {
  Corpus c = Separable();
  CrfModel m = TrainCrf(c, DefaultRules(), DefaultTemplates());
  std::ostringstream out;
  WriteCrf(m, out);
  EXPECT_EQ(out.str().rfind("#cuneilab-crf v1", 0), 0u);
  std::istringstream in(out.str());
  CrfModel back = ReadCrf(in);
  EXPECT_EQ(back.templates(), m.templates());
  EXPECT_EQ(back.rules(), m.rules());
  Rng rng(6);
  const std::vector<std::string> vocab = {"a", "b", "c", "ur-x", "gin"};
  for (int i = 0; i < 100; ++i) {
    Phrase p = oracle::RandomPhrase(rng, vocab, 1 + rng.Below(6));
    TagPath x = ViterbiCrf(m, p), y = ViterbiCrf(back, p);
    EXPECT_EQ(x.tags, y.tags);
    EXPECT_DOUBLE_EQ(x.score, y.score);
  }
}

}  // namespace
}  // namespace cuneilab
