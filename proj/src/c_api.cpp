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

#include "cuneilab/cuneilab.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "cuneilab/augment.hpp"
#include "cuneilab/corpus.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/hmm.hpp"
#include "cuneilab/interpret.hpp"
#include "cuneilab/metrics.hpp"
#include "cuneilab/rules.hpp"
#include "cuneilab/synthetic.hpp"
#include "cuneilab/tagger.hpp"
#include "cuneilab/translate.hpp"
#include "text_util.hpp"

using namespace cuneilab;

struct cl_corpus {
  Corpus corpus;
};
struct cl_ruleset {
  RuleSet rules;
};
struct cl_tagger {
  Tagger tagger;
};
struct cl_attribution {
  AttributionMap map;
};
struct cl_embeddings {
  EmbeddingTable table;
};
struct cl_lexicon {
  SynonymLexicon lexicon;
};
struct cl_entity_lexicon {
  EntityLexicon lexicon;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_error_line = 0;

template <typename F>
cl_status Guard(F&& f) {
  try {
    f();
    g_error.clear();
    g_error_line = 0;
    return CL_OK;
  } catch (const Error& e) {
    g_error = e.what();
    g_error_line = e.line();
    return static_cast<cl_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
  } catch (const std::exception& e) {
    g_error = e.what();
  } catch (...) {
    g_error = "unknown failure";
  }
  g_error_line = 0;
  return CL_INTERNAL;
}

template <typename T>
void Require(const T* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::ifstream OpenIn(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, std::string("cannot open ") + path);
  return in;
}

std::string FormatCorpus(const Corpus& corpus, cl_format format) {
  std::ostringstream out;
  switch (format) {
    case CL_FORMAT_NATIVE: WriteCorpus(corpus, out); break;
    case CL_FORMAT_CONLL: WriteConll(corpus, out); break;
    case CL_FORMAT_TEXT: WriteMonolingual(corpus, out); break;
    case CL_FORMAT_PARALLEL: WriteParallelTsv(corpus, out); break;
    default: throw Error(ErrorCode::kInvalidArgument, "unknown corpus format");
  }
  return out.str();
}

std::vector<std::string> Strings(const char* const* items, std::size_t n,
                                 const char* what) {
  if (n > 0) Require(items, what);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    Require(items[i], what);
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* cl_version(void) { return "1.0.0"; }

const char* cl_status_name(cl_status status) {
  if (status == CL_INTERNAL) return "Internal";
  return ErrorCodeName(static_cast<ErrorCode>(status)).data();
}

const char* cl_last_error(void) { return g_error.c_str(); }
size_t cl_last_error_line(void) { return g_error_line; }
void cl_string_free(char* s) { std::free(s); }

// ---- corpora ----

cl_status cl_corpus_read(const char* path, cl_format format, const char* tagset,
                         cl_corpus** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    if (format == CL_FORMAT_NATIVE) {
      *out = new cl_corpus{LoadCorpus(path)};
      return;
    }
    std::ifstream in = OpenIn(path);
    switch (format) {
      case CL_FORMAT_CONLL:
        Require(tagset, "tagset");
        *out = new cl_corpus{ParseConll(in, TagSet::ByName(tagset), path)};
        break;
      case CL_FORMAT_TEXT: *out = new cl_corpus{ParseMonolingual(in, path)}; break;
      case CL_FORMAT_PARALLEL: *out = new cl_corpus{ParseParallelTsv(in, path)}; break;
      default: throw Error(ErrorCode::kInvalidArgument, "unknown corpus format");
    }
  });
}

cl_status cl_corpus_read_parallel_files(const char* source_path,
                                        const char* target_path, cl_corpus** out) {
  return Guard([&] {
    Require(source_path, "source_path");
    Require(target_path, "target_path");
    Require(out, "out");
    std::ifstream src = OpenIn(source_path);
    std::ifstream tgt = OpenIn(target_path);
    *out = new cl_corpus{ParseParallelFiles(src, tgt, source_path)};
  });
}

cl_status cl_corpus_write(const cl_corpus* corpus, cl_format format, const char* path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(path, "path");
    internal::WriteFile(path, FormatCorpus(corpus->corpus, format));
  });
}

cl_status cl_corpus_format(const cl_corpus* corpus, cl_format format, char** out) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out, "out");
    *out = CopyString(FormatCorpus(corpus->corpus, format));
  });
}

size_t cl_corpus_size(const cl_corpus* corpus) {
  return corpus ? corpus->corpus.size() : 0;
}

cl_corpus_kind cl_corpus_get_kind(const cl_corpus* corpus) {
  return static_cast<cl_corpus_kind>(corpus->corpus.kind());
}

size_t cl_corpus_token_count(const cl_corpus* corpus) {
  if (!corpus) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < corpus->corpus.size(); ++i) {
    n += corpus->corpus.PhraseAt(i).size();
  }
  return n;
}

cl_status cl_corpus_build_comp(const cl_corpus* segments, cl_corpus** out,
                               size_t* unterminated) {
  return Guard([&] {
    Require(segments, "segments");
    Require(out, "out");
    CompResult r = BuildComp(segments->corpus);
    if (unterminated) {
      *unterminated = static_cast<std::size_t>(
          std::count(r.unterminated.begin(), r.unterminated.end(), true));
    }
    *out = new cl_corpus{std::move(r.corpus)};
  });
}

cl_status cl_corpus_split(const cl_corpus* corpus, double test_fraction,
                          uint64_t seed, cl_corpus** train, cl_corpus** test) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(train, "train");
    Require(test, "test");
    auto [a, b] = SplitTrainTest(corpus->corpus, test_fraction, seed);
    auto* tr = new cl_corpus{std::move(a)};
    *test = new cl_corpus{std::move(b)};
    *train = tr;
  });
}

cl_status cl_corpus_synthetic(size_t phrases, uint64_t seed, int ner,
                              double lexical_noise, double label_noise,
                              cl_corpus** out) {
  return Guard([&] {
    Require(out, "out");
    SyntheticOptions o;
    o.phrases = phrases;
    o.seed = seed;
    o.ner = ner != 0;
    o.lexical_noise = lexical_noise;
    o.label_noise = label_noise;
    *out = new cl_corpus{GenerateSynthetic(o)};
  });
}

void cl_corpus_free(cl_corpus* corpus) { delete corpus; }

// ---- rules ----

cl_status cl_rules_default(cl_ruleset** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new cl_ruleset{DefaultRules()};
  });
}

cl_status cl_rules_load(const char* path, cl_ruleset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_ruleset{LoadRules(path)};
  });
}

cl_status cl_rules_save(const cl_ruleset* rules, const char* path) {
  return Guard([&] {
    Require(rules, "rules");
    Require(path, "path");
    SaveRules(rules->rules, path);
  });
}

size_t cl_rules_size(const cl_ruleset* rules) { return rules ? rules->rules.size() : 0; }

cl_status cl_rules_lint(const cl_ruleset* rules, const cl_corpus* corpus,
                        char** report) {
  return Guard([&] {
    Require(rules, "rules");
    Require(corpus, "corpus");
    Require(report, "report");
    std::vector<Phrase> phrases;
    for (std::size_t i = 0; i < corpus->corpus.size(); ++i) {
      phrases.push_back(corpus->corpus.PhraseAt(i));
    }
    *report = CopyString(RulesLintReport(rules->rules, phrases));
  });
}

void cl_rules_free(cl_ruleset* rules) { delete rules; }

// ---- taggers ----

void cl_crf_options_default(cl_crf_options* options) {
  if (!options) return;
  CrfTrainOptions d;
  options->l2_sigma2 = d.l2_sigma2;
  options->max_iters = d.max_iters;
  options->grad_tol = d.grad_tol;
  options->threads = d.threads;
  options->gradient_descent = 0;
  options->verbose = 0;
}

cl_status cl_hmm_train(const cl_corpus* tagged, double smoothing_k, cl_tagger** out) {
  return Guard([&] {
    Require(tagged, "tagged");
    Require(out, "out");
    *out = new cl_tagger{Tagger(TrainHmm(tagged->corpus, smoothing_k))};
  });
}

cl_status cl_crf_train(const cl_corpus* tagged, const cl_ruleset* rules,
                       const char* templates, const cl_crf_options* options,
                       cl_tagger** out) {
  return Guard([&] {
    Require(tagged, "tagged");
    Require(out, "out");
    std::vector<FeatureTemplate> tpl;
    if (templates) {
      for (const auto& name : internal::Split(templates, ',')) {
        auto t = internal::Trim(name);
        if (!t.empty()) tpl.push_back(FeatureTemplate::Parse(t));
      }
      if (tpl.empty()) throw Error(ErrorCode::kInvalidArgument, "no feature templates");
    } else {
      tpl = DefaultTemplates();
    }
    CrfTrainOptions o;
    if (options) {
      o.l2_sigma2 = options->l2_sigma2;
      o.max_iters = options->max_iters;
      o.grad_tol = options->grad_tol;
      o.threads = options->threads;
      if (options->gradient_descent) o.optimizer = OptimizerKind::kGradientDescent;
      if (options->verbose) {
        o.progress = [](int it, double obj, double g) {
          std::cerr << "iter " << it << " objective " << internal::FormatFixed(obj, 4)
                    << " |g| " << internal::FormatFixed(g, 6) << '\n';
        };
      }
    }
    *out = new cl_tagger{
        Tagger(TrainCrf(tagged->corpus, rules ? rules->rules : RuleSet(), tpl, o))};
  });
}

cl_status cl_tagger_load(const char* path, cl_tagger** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_tagger{Tagger::Load(path)};
  });
}

cl_status cl_tagger_save(const cl_tagger* tagger, const char* path) {
  return Guard([&] {
    Require(tagger, "tagger");
    Require(path, "path");
    tagger->tagger.Save(path);
  });
}

const char* cl_tagger_tagset(const cl_tagger* tagger) {
  return tagger ? tagger->tagger.tagset().name().c_str() : "";
}

const char* cl_tagger_kind(const cl_tagger* tagger) {
  if (!tagger) return "";
  return tagger->tagger.kind() == TaggerKind::kCrf ? "crf" : "hmm";
}

cl_status cl_tagger_tag(const cl_tagger* tagger, const cl_corpus* in, cl_corpus** out) {
  return Guard([&] {
    Require(tagger, "tagger");
    Require(in, "in");
    Require(out, "out");
    *out = new cl_corpus{tagger->tagger.TagCorpus(in->corpus)};
  });
}

void cl_tagger_free(cl_tagger* tagger) { delete tagger; }

// ---- metrics ----

namespace {

Averaging ToAveraging(cl_averaging a) {
  switch (a) {
    case CL_AVG_PER_CLASS: return Averaging::kPerClass;
    case CL_AVG_MICRO: return Averaging::kMicro;
    case CL_AVG_WEIGHTED: return Averaging::kWeighted;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown averaging");
}

ConfusionMatrix ConfusionOf(const cl_corpus* gold, const cl_corpus* pred) {
  Require(gold, "gold");
  Require(pred, "pred");
  if (gold->corpus.tagset() != pred->corpus.tagset()) {
    throw Error(ErrorCode::kAlignmentMismatch, "gold and predicted tagsets differ");
  }
  return Confusion(gold->corpus.tagged(), pred->corpus.tagged(), gold->corpus.tagset());
}

}  // namespace

cl_status cl_eval_prf1(const cl_corpus* gold, const cl_corpus* pred,
                       cl_averaging averaging, cl_prf* out) {
  return Guard([&] {
    Require(out, "out");
    PrfReport r = Prf1(ConfusionOf(gold, pred), ToAveraging(averaging));
    *out = {r.precision, r.recall, r.f1, r.scored, r.errors};
  });
}

cl_status cl_eval_report(const cl_corpus* gold, const cl_corpus* pred,
                         const char* name, cl_averaging averaging, char** out) {
  return Guard([&] {
    Require(out, "out");
    const Averaging a = ToAveraging(averaging);
    PrfReport r = Prf1(ConfusionOf(gold, pred), a);
    EvalResult e;
    e.name = name && *name ? name : "model";
    e.averaging = std::string(AveragingName(a));
    e.precision = r.precision;
    e.recall = r.recall;
    e.f1 = r.f1;
    e.scored = r.scored;
    e.errors = r.errors;
    *out = CopyString(FormatEvalResult(e));
  });
}

cl_status cl_eval_table(const cl_corpus* gold, const cl_corpus* pred, char** out) {
  return Guard([&] {
    Require(out, "out");
    *out = CopyString(FormatPrfTable(ConfusionOf(gold, pred)));
  });
}

cl_status cl_error_rate_percent(size_t wrong, size_t scored, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = ErrorRatePercent(wrong, scored);
  });
}

cl_status cl_bleu(const char* const* hypotheses, const char* const* references,
                  size_t n, int max_n, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = CorpusBleu(Strings(hypotheses, n, "hypotheses"),
                      Strings(references, n, "references"), max_n);
  });
}

cl_status cl_sentence_bleu(const char* hypothesis, const char* reference, int max_n,
                           double* out) {
  return Guard([&] {
    Require(hypothesis, "hypothesis");
    Require(reference, "reference");
    Require(out, "out");
    *out = SentenceBleu(hypothesis, reference, max_n);
  });
}

cl_status cl_kappa(const char* const* a, const char* const* b, size_t n, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = CohenKappa(Strings(a, n, "a"), Strings(b, n, "b"));
  });
}

cl_status cl_human_eval(const char* path, char** report) {
  return Guard([&] {
    Require(path, "path");
    Require(report, "report");
    std::ifstream in = OpenIn(path);
    *report = CopyString(AggregateHumanEval(ReadHumanEval(in, path)).Format());
  });
}

cl_status cl_report(const char* const* paths, size_t n, char** out) {
  return Guard([&] {
    Require(out, "out");
    std::vector<EvalResult> results;
    for (const auto& path : Strings(paths, n, "paths")) {
      std::ifstream in = OpenIn(path.c_str());
      results.push_back(ParseEvalResult(in, path));
    }
    *out = CopyString(FormatComparison(results));
  });
}

// ---- augmentation ----

void cl_augment_plan_default(cl_augment_plan* plan) {
  if (!plan) return;
  AugmentPlan d;
  plan->techniques = 0;
  plan->multiplier = d.multiplier;
  plan->seed = d.seed;
  plan->cosine_threshold = d.cosine_threshold;
  plan->charswap_ops = CL_CHAR_ALL;
  plan->charswap_edits = d.charswap_edits;
  plan->max_replacements = d.max_replacements;
}

cl_status cl_embeddings_load(const char* path, cl_embeddings** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_embeddings{LoadEmbeddings(path)};
  });
}

void cl_embeddings_free(cl_embeddings* table) { delete table; }

cl_status cl_lexicon_load(const char* path, cl_lexicon** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_lexicon{LoadSynonyms(path)};
  });
}

void cl_lexicon_free(cl_lexicon* lexicon) { delete lexicon; }

cl_status cl_entity_lexicon_load(const char* path, cl_entity_lexicon** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_entity_lexicon{LoadEntityLexicon(path)};
  });
}

void cl_entity_lexicon_free(cl_entity_lexicon* lexicon) { delete lexicon; }

namespace {

std::set<CharOp> ToOps(unsigned bits) {
  std::set<CharOp> ops;
  if (bits & CL_CHAR_SUBSTITUTE) ops.insert(CharOp::kSubstitute);
  if (bits & CL_CHAR_DELETE) ops.insert(CharOp::kDelete);
  if (bits & CL_CHAR_INSERT) ops.insert(CharOp::kInsert);
  if (bits & CL_CHAR_SWAP) ops.insert(CharOp::kSwapAdjacent);
  return ops;
}

}  // namespace

cl_status cl_augment(const cl_corpus* lines, const cl_augment_plan* plan,
                     const cl_embeddings* embeddings, const cl_lexicon* synonyms,
                     const cl_entity_lexicon* entities, cl_corpus** out,
                     char** report) {
  return Guard([&] {
    Require(lines, "lines");
    Require(plan, "plan");
    Require(out, "out");
    AugmentPlan p;
    if (plan->techniques & CL_TECH_EMBEDDING) p.techniques.insert(Technique::kEmbeddingNeighbor);
    if (plan->techniques & CL_TECH_LEXICON) p.techniques.insert(Technique::kLexicon);
    if (plan->techniques & CL_TECH_CHARSWAP) p.techniques.insert(Technique::kCharSwap);
    if (plan->techniques & CL_TECH_NE) p.techniques.insert(Technique::kNeSubstitution);
    p.multiplier = plan->multiplier;
    p.seed = plan->seed;
    p.cosine_threshold = plan->cosine_threshold;
    p.charswap_ops = ToOps(plan->charswap_ops);
    p.charswap_edits = plan->charswap_edits;
    p.max_replacements = plan->max_replacements;
    AugmentResources res;
    res.embeddings = embeddings ? &embeddings->table : nullptr;
    res.synonyms = synonyms ? &synonyms->lexicon : nullptr;
    res.entities = entities ? &entities->lexicon : nullptr;
    AugmentReport rep;
    Corpus result = RunPlan(lines->corpus, p, res, &rep);
    std::string text;
    if (report) {
      text += "originals " + std::to_string(rep.originals) + "\n";
      for (Technique t : p.techniques) {
        const std::string name(TechniqueName(t));
        text += "kept." + name + " " + std::to_string(rep.kept[t]) + "\n";
        text += "dropped." + name + " " + std::to_string(rep.dropped[t]) + "\n";
      }
      text += "total " + std::to_string(rep.total) + "\n";
    }
    auto* c = new cl_corpus{std::move(result)};
    if (report) {
      try {
        *report = CopyString(text);
      } catch (...) {
        delete c;
        throw;
      }
    }
    *out = c;
  });
}

cl_status cl_ne_substitute(const cl_corpus* tagged, const cl_entity_lexicon* entities,
                           size_t multiplier, uint64_t seed, cl_corpus** out) {
  return Guard([&] {
    Require(tagged, "tagged");
    Require(entities, "entities");
    Require(out, "out");
    *out = new cl_corpus{NeSubstitute(tagged->corpus, entities->lexicon, multiplier, seed)};
  });
}

cl_status cl_charswap(const char* line, unsigned ops, size_t edits, uint64_t seed,
                      char** out) {
  return Guard([&] {
    Require(line, "line");
    Require(out, "out");
    *out = CopyString(CharSwap(line, ToOps(ops), edits, seed));
  });
}

cl_status cl_ft_run(const cl_corpus* monolingual, const char* const* argv, size_t argc,
                    size_t shard_size, int resume, const char* out_dir,
                    size_t* shards_run, size_t* shards_skipped, size_t* pairs) {
  return Guard([&] {
    Require(monolingual, "monolingual");
    Require(out_dir, "out_dir");
    Translator t{Strings(argv, argc, "argv")};
    FtOptions o;
    o.shard_size = shard_size;
    o.resume = resume != 0;
    FtResult r = ForwardTranslate(monolingual->corpus, t, out_dir, o);
    if (shards_run) *shards_run = r.shards_run;
    if (shards_skipped) *shards_skipped = r.shards_skipped;
    if (pairs) *pairs = r.merged.size();
  });
}

// ---- attribution ----

cl_status cl_attribute(const cl_tagger* tagger, const char* phrase_id, const char* text,
                       size_t position, const char* label, cl_attr_method method,
                       size_t samples, uint64_t seed, int sign_level,
                       cl_attribution** out) {
  return Guard([&] {
    Require(tagger, "tagger");
    Require(text, "text");
    Require(out, "out");
    Phrase phrase = MakePhrase(std::string_view(text), phrase_id ? phrase_id : "");
    Target target = label ? Target{position, label}
                          : PredictedTarget(tagger->tagger, phrase, position);
    TaggerScorer scorer(tagger->tagger);
    AttributionMap map;
    switch (method) {
      case CL_ATTR_OCCLUSION: map = Occlusion(scorer, phrase, target); break;
      case CL_ATTR_LEAVE_ONE_OUT: map = LeaveOneOut(scorer, phrase, target); break;
      case CL_ATTR_SHAPLEY_EXACT: map = ShapleyExact(scorer, phrase, target); break;
      case CL_ATTR_SHAPLEY_SAMPLED:
        map = ShapleySampled(scorer, phrase, target, samples, seed);
        break;
      default: throw Error(ErrorCode::kInvalidArgument, "unknown attribution method");
    }
    if (sign_level) AddSignOcclusion(scorer, map);
    *out = new cl_attribution{std::move(map)};
  });
}

cl_status cl_attribution_load(const char* path, cl_attribution** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new cl_attribution{LoadAttribution(path)};
  });
}

cl_status cl_attribution_save(const cl_attribution* map, const char* path) {
  return Guard([&] {
    Require(map, "map");
    Require(path, "path");
    SaveAttribution(map->map, path);
  });
}

size_t cl_attribution_size(const cl_attribution* map) {
  return map ? map->map.scores.size() : 0;
}

cl_status cl_attribution_score(const cl_attribution* map, size_t index, double* out) {
  return Guard([&] {
    Require(map, "map");
    Require(out, "out");
    if (index >= map->map.scores.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "token " + std::to_string(index));
    }
    *out = map->map.scores[index];
  });
}

const char* cl_attribution_label(const cl_attribution* map) {
  return map ? map->map.target.label.c_str() : "";
}

cl_status cl_plausibility(const cl_attribution* map, const size_t* annotated, size_t n,
                          double* out) {
  return Guard([&] {
    Require(map, "map");
    Require(out, "out");
    if (n > 0) Require(annotated, "annotated");
    AnnotationMask mask;
    mask.phrase_id = map->map.phrase.id;
    mask.annotated.insert(annotated, annotated + n);
    *out = Plausibility(map->map, mask);
  });
}

cl_status cl_render(const cl_attribution* const* maps, const cl_correctness* correctness,
                    size_t n, int html, char** out) {
  return Guard([&] {
    Require(out, "out");
    if (n == 0) throw Error(ErrorCode::kNoInputs, "no attribution maps");
    Require(maps, "maps");
    std::vector<RenderItem> items;
    for (std::size_t i = 0; i < n; ++i) {
      Require(maps[i], "maps[i]");
      Correctness c = Correctness::kUnknown;
      if (correctness) {
        switch (correctness[i]) {
          case CL_CORRECT: c = Correctness::kCorrect; break;
          case CL_WRONG: c = Correctness::kWrong; break;
          case CL_UNKNOWN: c = Correctness::kUnknown; break;
          default: throw Error(ErrorCode::kInvalidArgument, "unknown correctness");
        }
      }
      items.push_back({&maps[i]->map, c});
    }
    *out = CopyString(Render(items, html ? RenderFormat::kHtml : RenderFormat::kAnsi));
  });
}

void cl_attribution_free(cl_attribution* map) { delete map; }

}  // extern "C"
