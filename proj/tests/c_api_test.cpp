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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "cuneilab/cuneilab.h"

namespace {

namespace fs = std::filesystem;

struct Dir {
  fs::path path;
  explicit Dir(const std::string& name)
      : path(fs::temp_directory_path() / ("cuneilab-capi-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Dir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string Take(char* s) {
  std::string out = s ? s : "";
  cl_string_free(s);
  return out;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(cl_version(), "");
  EXPECT_STREQ(cl_status_name(CL_OK), "Ok");
  EXPECT_STREQ(cl_status_name(CL_UNKNOWN_LABEL), "UnknownLabel");
  EXPECT_STREQ(cl_status_name(CL_MANIFEST_MISMATCH), "ManifestMismatch");
}

TEST(CApi, ErrorsCarryMessageAndLine) {
  Dir d("errors");
  std::ofstream(d / "bad.conll") << "a\tN\n\nb\tXX\n\n";
  cl_corpus* c = nullptr;
  EXPECT_EQ(cl_corpus_read((d / "bad.conll").c_str(), CL_FORMAT_CONLL, "pos", &c),
            CL_UNKNOWN_LABEL);
  EXPECT_EQ(c, nullptr);
  EXPECT_EQ(cl_last_error_line(), 3u);
  EXPECT_NE(std::string(cl_last_error()).find("XX"), std::string::npos);
  EXPECT_EQ(cl_corpus_read(nullptr, CL_FORMAT_CONLL, "pos", &c), CL_INVALID_ARGUMENT);
}

TEST(CApi, TrainTagEvaluate) {
  Dir d("pipeline");
  cl_corpus* all = nullptr;
  ASSERT_EQ(cl_corpus_synthetic(400, 3, 0, 0.02, 0.01, &all), CL_OK);
  cl_corpus *train = nullptr, *test = nullptr;
  ASSERT_EQ(cl_corpus_split(all, 0.2, 3, &train, &test), CL_OK);
  EXPECT_EQ(cl_corpus_size(train) + cl_corpus_size(test), 400u);
  EXPECT_EQ(cl_corpus_get_kind(test), CL_CORPUS_TAGGED);

  cl_ruleset* rules = nullptr;
  ASSERT_EQ(cl_rules_default(&rules), CL_OK);
  EXPECT_EQ(cl_rules_size(rules), 10u);
  cl_crf_options opts;
  cl_crf_options_default(&opts);
  EXPECT_EQ(opts.l2_sigma2, 10.0);
  EXPECT_EQ(opts.max_iters, 200);
  opts.max_iters = 60;
  cl_tagger* crf = nullptr;
  ASSERT_EQ(cl_crf_train(train, rules, nullptr, &opts, &crf), CL_OK) << cl_last_error();
  EXPECT_STREQ(cl_tagger_kind(crf), "crf");
  EXPECT_STREQ(cl_tagger_tagset(crf), "POS");
  ASSERT_EQ(cl_tagger_save(crf, (d / "m.crf").c_str()), CL_OK);
  cl_tagger* loaded = nullptr;
  ASSERT_EQ(cl_tagger_load((d / "m.crf").c_str(), &loaded), CL_OK);

  cl_corpus* pred = nullptr;
  ASSERT_EQ(cl_tagger_tag(loaded, test, &pred), CL_OK);
  cl_prf prf;
  ASSERT_EQ(cl_eval_prf1(test, pred, CL_AVG_WEIGHTED, &prf), CL_OK);
  EXPECT_GT(prf.f1, 0.8);
  EXPECT_EQ(prf.scored, cl_corpus_token_count(test));
  char* report = nullptr;
  ASSERT_EQ(cl_eval_report(test, test, "gold", CL_AVG_WEIGHTED, &report), CL_OK);
  EXPECT_NE(Take(report).find("f1 1.0000"), std::string::npos);

  cl_tagger* hmm = nullptr;
  ASSERT_EQ(cl_hmm_train(train, 0.1, &hmm), CL_OK);
  EXPECT_STREQ(cl_tagger_kind(hmm), "hmm");

  cl_attribution* map = nullptr;
  ASSERT_EQ(cl_attribute(crf, "p1", "ur-{d}nanna dumu lu2-gi", 0, nullptr,
                         CL_ATTR_SHAPLEY_EXACT, 0, 0, 1, &map),
            CL_OK)
      << cl_last_error();
  EXPECT_EQ(cl_attribution_size(map), 3u);
  double s = 0.0;
  EXPECT_EQ(cl_attribution_score(map, 0, &s), CL_OK);
  EXPECT_EQ(cl_attribution_score(map, 3, &s), CL_INDEX_OUT_OF_RANGE);
  const size_t marked[] = {0};
  double plaus = -1.0;
  EXPECT_EQ(cl_plausibility(map, marked, 1, &plaus), CL_OK);
  EXPECT_GE(plaus, 0.0);
  EXPECT_LE(plaus, 1.0);
  ASSERT_EQ(cl_attribution_save(map, (d / "a.attr").c_str()), CL_OK);
  cl_attribution* back = nullptr;
  ASSERT_EQ(cl_attribution_load((d / "a.attr").c_str(), &back), CL_OK);
  const cl_attribution* maps[] = {back};
  const cl_correctness marks[] = {CL_CORRECT};
  char* html = nullptr;
  ASSERT_EQ(cl_render(maps, marks, 1, 1, &html), CL_OK);
  EXPECT_EQ(Take(html).rfind("<!DOCTYPE html>", 0), 0u);

  cl_attribution_free(back);
  cl_attribution_free(map);
  cl_tagger_free(hmm);
  cl_corpus_free(pred);
  cl_tagger_free(loaded);
  cl_tagger_free(crf);
  cl_rules_free(rules);
  cl_corpus_free(test);
  cl_corpus_free(train);
  cl_corpus_free(all);
}

TEST(CApi, MetricsAndAugment) {
  const char* hyp[] = {"the cat"};
  const char* ref[] = {"the cat sat"};
  double b = 0.0;
  ASSERT_EQ(cl_bleu(hyp, ref, 1, 4, &b), CL_OK);
  EXPECT_NEAR(b, 0.6065, 1e-4);
  const char* ka[] = {"3", "3", "2", "1"};
  const char* kb[] = {"3", "2", "2", "1"};
  double k = 0.0;
  ASSERT_EQ(cl_kappa(ka, kb, 4, &k), CL_OK);
  EXPECT_NEAR(k, 0.4375 / 0.6875, 1e-9);
  double rate = 0.0;
  ASSERT_EQ(cl_error_rate_percent(8, 496, &rate), CL_OK);
  EXPECT_NEAR(rate, 1.61, 0.005);
  EXPECT_EQ(cl_error_rate_percent(1, 0, &rate), CL_EMPTY_INPUT);

  char* swapped = nullptr;
  ASSERT_EQ(cl_charswap("ab", CL_CHAR_SWAP, 1, 3, &swapped), CL_OK);
  EXPECT_EQ(Take(swapped), "ba");

  cl_corpus* lines = nullptr;
  ASSERT_EQ(cl_corpus_synthetic(30, 1, 0, 0.0, 0.0, &lines), CL_OK);
  cl_augment_plan plan;
  cl_augment_plan_default(&plan);
  EXPECT_EQ(plan.multiplier, 4u);
  EXPECT_EQ(plan.cosine_threshold, 0.8);
  plan.techniques = CL_TECH_CHARSWAP;
  cl_corpus* out = nullptr;
  char* report = nullptr;
  ASSERT_EQ(cl_augment(lines, &plan, nullptr, nullptr, nullptr, &out, &report), CL_OK)
      << cl_last_error();
  EXPECT_NE(Take(report).find("originals 30"), std::string::npos);
  EXPECT_GT(cl_corpus_size(out), 30u);
  plan.techniques = CL_TECH_LEXICON;
  cl_corpus* none = nullptr;
  EXPECT_EQ(cl_augment(lines, &plan, nullptr, nullptr, nullptr, &none, nullptr),
            CL_MISSING_RESOURCE);
  cl_corpus_free(out);
  cl_corpus_free(lines);
}

TEST(CApi, ForwardTranslation) {
  Dir d("ft");
  std::ofstream(d / "mono.txt") << "a b\nc d\ne\n";
  cl_corpus* mono = nullptr;
  ASSERT_EQ(cl_corpus_read((d / "mono.txt").c_str(), CL_FORMAT_TEXT, nullptr, &mono), CL_OK);
  const char* argv[] = {"cat"};
  size_t run = 0, skipped = 0, pairs = 0;
  ASSERT_EQ(cl_ft_run(mono, argv, 1, 2, 1, (d / "out").c_str(), &run, &skipped, &pairs),
            CL_OK)
      << cl_last_error();
  EXPECT_EQ(run, 2u);
  EXPECT_EQ(pairs, 3u);
  const char* fail[] = {"false"};
  EXPECT_EQ(cl_ft_run(mono, fail, 1, 2, 0, (d / "out2").c_str(), &run, &skipped, &pairs),
            CL_TRANSLATOR_FAILED);
  cl_corpus_free(mono);
}

}  // namespace
