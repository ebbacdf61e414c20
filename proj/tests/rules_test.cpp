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
#include <set>
#include <sstream>

#include "cuneilab/corpus.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"
#include "cuneilab/rules.hpp"

namespace cuneilab {
namespace {

std::set<std::string> Fired(const RuleSet& rules, const std::vector<std::string>& words,
                            std::size_t pos) {
  auto ids = ApplyRules(rules, MakePhrase(words), pos);
  return {ids.begin(), ids.end()};
}

TEST(DefaultRules, Inventory) {
  RuleSet rules = DefaultRules();
  EXPECT_EQ(rules.size(), 10u);
  std::set<std::string> ids;
  for (const auto& r : rules.rules()) {
    EXPECT_TRUE(IsValidHint(r.hint)) << r.hint;
    ids.insert(r.id);
  }
  EXPECT_EQ(ids.size(), rules.size());
  auto count = [&](RuleKind k) {
    return std::count_if(rules.rules().begin(), rules.rules().end(),
                         [&](const Rule& r) { return r.kind == k; });
  };
  EXPECT_EQ(count(RuleKind::kPrefix), 3);
  EXPECT_EQ(count(RuleKind::kPrevEquals), 2);
  EXPECT_EQ(count(RuleKind::kContains), 3);
  EXPECT_EQ(count(RuleKind::kSuffix), 1);
  EXPECT_EQ(count(RuleKind::kNextEquals), 1);
}

TEST(DefaultRules, DivineNameFiresThree) {
  EXPECT_EQ(Fired(DefaultRules(), {"ur-{d}asznan"}, 0),
            (std::set<std::string>{"prefix-ur", "contains-d-pn", "contains-d-dn"}));
}

TEST(DefaultRules, FollowedByGin) {
  EXPECT_EQ(Fired(DefaultRules(), {"e2", "gin"}, 0),
            (std::set<std::string>{"before-gin"}));
}

TEST(DefaultRules, YearCueAttachesToNextTokenOnly) {
  EXPECT_EQ(Fired(DefaultRules(), {"mu", "us2-sa"}, 1),
            (std::set<std::string>{"after-mu"}));
  EXPECT_TRUE(Fired(DefaultRules(), {"mu", "us2-sa", "e2"}, 2).empty());
}

TEST(DefaultRules, BoundaryAndPlainWord) {
  EXPECT_TRUE(Fired(DefaultRules(), {"ku3-babbar"}, 0).empty());
  EXPECT_TRUE(Fired(DefaultRules(), {"gin"}, 0).empty());
}

TEST(DefaultRules, PlaceNameConflict) {
  EXPECT_EQ(Fired(DefaultRules(), {"ur-bi2-lum{ki}"}, 0),
            (std::set<std::string>{"prefix-ur", "contains-ki"}));
}

TEST(ApplyRules, OutOfRange) {
  try {
    ApplyRules(DefaultRules(), MakePhrase("a b"), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

// Reference string scan, written independently of RuleFires.
bool Scan(const Rule& r, const std::vector<std::string>& w, std::size_t i) {
  const std::string& s = w[i];
  switch (r.kind) {
    case RuleKind::kPrefix: return s.size() >= r.pattern.size() && s.substr(0, r.pattern.size()) == r.pattern;
    case RuleKind::kSuffix:
      return s.size() >= r.pattern.size() &&
             s.substr(s.size() - r.pattern.size()) == r.pattern;
    case RuleKind::kContains: return s.find(r.pattern) != std::string::npos;
    case RuleKind::kEquals: return s == r.pattern;
    case RuleKind::kPrevEquals: return i > 0 && w[i - 1] == r.pattern;
    case RuleKind::kNextEquals: return i + 1 < w.size() && w[i + 1] == r.pattern;
  }
  return false;
}

TEST(ApplyRules, MatchesStringScanAndIsOrderIndependent) {
  const std::vector<std::string> vocab = {
      "ur-{d}nanna", "lu2-gi", "dumu", "mu", "iti", "ki", "nibru{ki}", "mu-hul",
      "gin", "e2", "{d}en-lil2", "ba-hul", "szu", "sze", "5(disz)", "lugal"};
  RuleSet rules = DefaultRules();
  std::vector<Rule> shuffled = rules.rules();
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> words;
    for (std::size_t k = 0, n = 1 + rng.Below(6); k < n; ++k) words.push_back(rng.Pick(vocab));
    rng.Shuffle(shuffled);
    RuleSet permuted(shuffled);
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::set<std::string> expect;
      for (const auto& r : rules.rules()) {
        if (Scan(r, words, i)) expect.insert(r.id);
      }
      EXPECT_EQ(Fired(rules, words, i), expect);
      EXPECT_EQ(Fired(permuted, words, i), expect);
    }
  }
}

TEST(RulesFile, DefaultRoundTrip) {
  std::ostringstream out;
  WriteRules(DefaultRules(), out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadRules(in), DefaultRules());
}

TEST(RulesFile, Errors) {
  std::istringstream bad("FOO\tx\tN\tr1\n");
  try {
    ReadRules(bad, "r.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownRuleKind);
    EXPECT_EQ(e.line(), 1u);
  }
  std::istringstream dup("PREFIX\tx\tN\tr1\nSUFFIX\ty\tV\tr1\n");
  try {
    ReadRules(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
  }
}

TEST(RulesFile, RandomRoundTrip) {
  const std::vector<RuleKind> kinds = {RuleKind::kPrefix, RuleKind::kSuffix,
                                       RuleKind::kContains, RuleKind::kEquals,
                                       RuleKind::kPrevEquals, RuleKind::kNextEquals};
  const std::vector<std::string> hints = {"N", "V", "PN", "GN", "DN", "YEAR", "MONTH", "NU"};
  Rng rng(3);
  std::vector<Rule> rules;
  for (int i = 0; i < 100; ++i) {
    std::string pattern;
    for (std::size_t k = 0, n = 1 + rng.Below(5); k < n; ++k) {
      pattern += "abk{}-23"[rng.Below(8)];
    }
    rules.push_back({rng.Pick(kinds), pattern, rng.Pick(hints), "r" + std::to_string(i)});
  }
  RuleSet set(rules);
  std::ostringstream out;
  WriteRules(set, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadRules(in), set);
}

TEST(RulesLint, ListsFirings) {
  std::string report = RulesLintReport(DefaultRules(), {MakePhrase("ur-{d}nanna gin")});
  EXPECT_NE(report.find("prefix-ur"), std::string::npos);
  EXPECT_NE(report.find("contains-d-dn"), std::string::npos);
}

// A rule is evidence, not a verdict: training data that contradicts it wins.
TEST(Rules, AreSoftFeatures) {
  RuleSet rules({{RuleKind::kPrefix, "ur-", "PN", "prefix-ur"}});
  const TagSet& pos = TagSet::Pos();
  const int n = *pos.IndexOf("N");
  std::vector<TaggedPhrase> data;
  for (int i = 0; i < 20; ++i) {
    data.push_back({MakePhrase("ur-sag" + std::to_string(i % 4)), {n}});
  }
  Corpus corpus = Corpus::Tagged(data, pos);
  CrfModel model = TrainCrf(corpus, rules,
                            {{TemplateKind::kRuleFeature, 0}, {TemplateKind::kBias, 0}});
  EXPECT_EQ(ViterbiCrf(model, MakePhrase("ur-nigin")).tags, std::vector<int>{n});
}

}  // namespace
}  // namespace cuneilab
