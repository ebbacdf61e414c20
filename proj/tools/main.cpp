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

// cuneilab command-line front end. Everything goes through the C API.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "cuneilab/cuneilab.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExternal = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int ExitCodeFor(cl_status status) {
  switch (status) {
    case CL_TRANSLATOR_FAILED:
    case CL_LINE_COUNT_MISMATCH:
      return kExitExternal;
    case CL_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitData;
  }
}

void Check(cl_status status) {
  if (status != CL_OK) throw Failure{ExitCodeFor(status), cl_last_error()};
}

Failure Usage(const std::string& message) { return Failure{kExitUsage, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CorpusPtr = std::unique_ptr<cl_corpus, Deleter<cl_corpus, cl_corpus_free>>;
using RulesPtr = std::unique_ptr<cl_ruleset, Deleter<cl_ruleset, cl_rules_free>>;
using TaggerPtr = std::unique_ptr<cl_tagger, Deleter<cl_tagger, cl_tagger_free>>;
using AttrPtr =
    std::unique_ptr<cl_attribution, Deleter<cl_attribution, cl_attribution_free>>;
using EmbPtr = std::unique_ptr<cl_embeddings, Deleter<cl_embeddings, cl_embeddings_free>>;
using LexPtr = std::unique_ptr<cl_lexicon, Deleter<cl_lexicon, cl_lexicon_free>>;
using EntPtr = std::unique_ptr<cl_entity_lexicon,
                               Deleter<cl_entity_lexicon, cl_entity_lexicon_free>>;

// Takes ownership of a library-allocated string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  cl_string_free(s);
  return out;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, path + ": cannot open"};
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kExitData, path + ": cannot write"};
}

void Emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    WriteText(out_path, text);
  }
}

cl_format FormatFor(const std::string& path, const std::string& name) {
  if (name == "native") return CL_FORMAT_NATIVE;
  if (name == "conll") return CL_FORMAT_CONLL;
  if (name == "text") return CL_FORMAT_TEXT;
  if (name == "parallel") return CL_FORMAT_PARALLEL;
  if (name != "auto") {
    throw Usage("unknown format '" + name + "' (expected auto|native|conll|text|parallel)");
  }
  std::ifstream in(path, std::ios::binary);
  std::string first;
  std::getline(in, first);
  if (first.rfind("#cuneilab-corpus", 0) == 0) return CL_FORMAT_NATIVE;
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".conll") return CL_FORMAT_CONLL;
  if (ext == ".tsv") return CL_FORMAT_PARALLEL;
  return CL_FORMAT_TEXT;
}

CorpusPtr ReadCorpus(const std::string& path, const std::string& format,
                     const std::string& tagset) {
  cl_corpus* c = nullptr;
  Check(cl_corpus_read(path.c_str(), FormatFor(path, format), tagset.c_str(), &c));
  return CorpusPtr(c);
}

std::uint64_t ParseSeed(const std::string& text, const std::string& origin) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw Usage("invalid seed '" + text + "' from " + origin);
  }
  return v;
}

// --seed (or the config file), else CUNEILAB_SEED; announced on stderr.
std::uint64_t RequireSeed(const std::string& flag) {
  std::uint64_t seed = 0;
  if (!flag.empty()) {
    seed = ParseSeed(flag, "--seed");
  } else if (const char* env = std::getenv("CUNEILAB_SEED"); env && *env) {
    seed = ParseSeed(env, "CUNEILAB_SEED");
  } else {
    throw Usage("this command is randomized: pass --seed or set CUNEILAB_SEED");
  }
  static bool announced = false;
  if (!announced) std::cerr << "seed " << seed << '\n';
  announced = true;
  return seed;
}

void Require(const std::string& value, const std::string& name) {
  if (value.empty()) {
    throw Usage("--" + name + " is required (or set '" + name + "' in the config file)");
  }
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos && buf[0] == '-') {
    return buf + 1;
  }
  return buf;
}

// Options that may also come from the config file, keyed by long name.
struct Registry {
  std::map<std::string, std::vector<CLI::Option*>> options;
  std::set<std::string> path_keys;

  template <typename T>
  CLI::Option* Opt(CLI::App* app, const std::string& name, T& var,
                   const std::string& desc) {
    CLI::Option* o = app->add_option("--" + name, var, desc);
    options[name].push_back(o);
    return o;
  }
  CLI::Option* Path(CLI::App* app, const std::string& name, std::string& var,
                    const std::string& desc) {
    path_keys.insert(name);
    return Opt(app, name, var, desc);
  }
  CLI::Option* Flag(CLI::App* app, const std::string& name, bool& var,
                    const std::string& desc) {
    CLI::Option* o = app->add_flag("--" + name, var, desc);
    options[name].push_back(o);
    return o;
  }
};

struct Options {
  std::string config;
  // shared
  std::string in, out, format = "auto", tagset = "pos", seed, model, rules;
  // prepare
  std::string target;
  std::size_t synthetic = 0;
  double lexical_noise = 0.02, label_noise = 0.01, test_fraction = 0.0;
  bool comp = false;
  // training
  std::string train, templates, optimizer = "lbfgs";
  double smoothing = 0.1, l2 = 10.0, grad_tol = 1e-4;
  int max_iters = 200, threads = 1;
  bool no_rules = false, verbose = false;
  // eval
  std::string gold, pred, avg = "weighted", name;
  bool table = false;
  // bleu / kappa
  std::string hyp, ref, a, b;
  int max_n = 4;
  // augment
  std::string techniques = "embedding,lexicon,charswap", embeddings, lexicon, entities,
              charswap_ops = "substitute,delete,insert,swap";
  std::size_t multiplier = 4, edits = 1, max_replacements = 2;
  double threshold = 0.8;
  // ft-run
  std::size_t shard_size = 1000;
  bool no_resume = false;
  std::vector<std::string> translator;
  // attribute / render / report
  std::string text, label, method = "occlusion", annotations, id,
              correctness = "unknown";
  std::size_t phrase = 0, position = 0, samples = 2000;
  bool signs = false;
  std::vector<std::string> inputs;
};

// --- subcommands --------------------------------------------------------

void RunPrepare(const Options& o) {
  Require(o.out, "out");
  CorpusPtr corpus;
  if (o.synthetic > 0) {
    const std::uint64_t seed = RequireSeed(o.seed);
    cl_corpus* c = nullptr;
    Check(cl_corpus_synthetic(o.synthetic, seed, o.tagset == "ner", o.lexical_noise,
                              o.label_noise, &c));
    corpus.reset(c);
  } else {
    Require(o.in, "in");
    if (!o.target.empty()) {
      cl_corpus* c = nullptr;
      Check(cl_corpus_read_parallel_files(o.in.c_str(), o.target.c_str(), &c));
      corpus.reset(c);
    } else {
      corpus = ReadCorpus(o.in, o.format, o.tagset);
    }
  }
  if (o.comp) {
    cl_corpus* c = nullptr;
    std::size_t unterminated = 0;
    Check(cl_corpus_build_comp(corpus.get(), &c, &unterminated));
    corpus.reset(c);
    std::cout << "unterminated " << unterminated << '\n';
  }
  fs::create_directories(o.out);
  const bool tagged = cl_corpus_get_kind(corpus.get()) == CL_CORPUS_TAGGED;
  auto save = [&](const cl_corpus* c, const std::string& stem) {
    const fs::path base = fs::path(o.out) / stem;
    Check(cl_corpus_write(c, CL_FORMAT_NATIVE, (base.string() + ".corpus").c_str()));
    Check(cl_corpus_write(c, CL_FORMAT_TEXT, (base.string() + ".txt").c_str()));
    if (tagged) {
      Check(cl_corpus_write(c, CL_FORMAT_CONLL, (base.string() + ".conll").c_str()));
    }
    std::cout << stem << ".phrases " << cl_corpus_size(c) << '\n';
    std::cout << stem << ".tokens " << cl_corpus_token_count(c) << '\n';
  };
  if (o.test_fraction > 0.0) {
    const std::uint64_t seed = RequireSeed(o.seed);
    cl_corpus* train = nullptr;
    cl_corpus* test = nullptr;
    Check(cl_corpus_split(corpus.get(), o.test_fraction, seed, &train, &test));
    CorpusPtr tr(train), te(test);
    save(tr.get(), "train");
    save(te.get(), "test");
  } else {
    save(corpus.get(), "corpus");
  }
}

RulesPtr LoadRules(const std::string& path) {
  cl_ruleset* r = nullptr;
  if (path.empty()) {
    Check(cl_rules_default(&r));
  } else {
    Check(cl_rules_load(path.c_str(), &r));
  }
  return RulesPtr(r);
}

void RunRulesLint(const Options& o) {
  Require(o.in, "in");
  RulesPtr rules = LoadRules(o.rules);
  CorpusPtr corpus = ReadCorpus(o.in, o.format, o.tagset);
  char* report = nullptr;
  Check(cl_rules_lint(rules.get(), corpus.get(), &report));
  Emit(o.out, Take(report));
}

void SaveTagger(const cl_tagger* t, const std::string& path) {
  Check(cl_tagger_save(t, path.c_str()));
  std::cout << "model " << path << '\n';
}

void RunTrainHmm(const Options& o) {
  Require(o.train, "train");
  Require(o.out, "out");
  CorpusPtr corpus = ReadCorpus(o.train, o.format, o.tagset);
  cl_tagger* t = nullptr;
  Check(cl_hmm_train(corpus.get(), o.smoothing, &t));
  TaggerPtr tagger(t);
  SaveTagger(tagger.get(), o.out);
}

void RunTrainCrf(const Options& o) {
  Require(o.train, "train");
  Require(o.out, "out");
  if (o.optimizer != "lbfgs" && o.optimizer != "gd") {
    throw Usage("unknown optimizer '" + o.optimizer + "' (expected lbfgs|gd)");
  }
  CorpusPtr corpus = ReadCorpus(o.train, o.format, o.tagset);
  RulesPtr rules;
  if (!o.no_rules) rules = LoadRules(o.rules);
  cl_crf_options opts;
  cl_crf_options_default(&opts);
  opts.l2_sigma2 = o.l2;
  opts.max_iters = o.max_iters;
  opts.grad_tol = o.grad_tol;
  opts.threads = o.threads;
  opts.gradient_descent = o.optimizer == "gd";
  opts.verbose = o.verbose;
  cl_tagger* t = nullptr;
  Check(cl_crf_train(corpus.get(), rules.get(),
                     o.templates.empty() ? nullptr : o.templates.c_str(), &opts, &t));
  TaggerPtr tagger(t);
  SaveTagger(tagger.get(), o.out);
}

TaggerPtr LoadTagger(const std::string& path) {
  cl_tagger* t = nullptr;
  Check(cl_tagger_load(path.c_str(), &t));
  return TaggerPtr(t);
}

void RunTag(const Options& o, bool tagset_given) {
  Require(o.model, "model");
  Require(o.in, "in");
  TaggerPtr tagger = LoadTagger(o.model);
  auto upper = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  if (tagset_given && upper(o.tagset) != upper(cl_tagger_tagset(tagger.get()))) {
    throw Usage("--tagset " + o.tagset + " does not match the model's tagset " +
                cl_tagger_tagset(tagger.get()));
  }
  CorpusPtr input = ReadCorpus(o.in, o.format, cl_tagger_tagset(tagger.get()));
  cl_corpus* out = nullptr;
  Check(cl_tagger_tag(tagger.get(), input.get(), &out));
  CorpusPtr tagged(out);
  char* text = nullptr;
  Check(cl_corpus_format(tagged.get(), CL_FORMAT_CONLL, &text));
  Emit(o.out, Take(text));
}

cl_averaging ParseAvg(const std::string& name) {
  if (name == "weighted") return CL_AVG_WEIGHTED;
  if (name == "micro") return CL_AVG_MICRO;
  if (name == "per-class" || name == "macro") return CL_AVG_PER_CLASS;
  throw Usage("unknown averaging '" + name + "' (expected weighted|micro|per-class)");
}

void RunEval(const Options& o) {
  Require(o.gold, "gold");
  Require(o.pred, "pred");
  const cl_averaging avg = ParseAvg(o.avg);
  CorpusPtr gold = ReadCorpus(o.gold, "conll", o.tagset);
  CorpusPtr pred = ReadCorpus(o.pred, "conll", o.tagset);
  char* text = nullptr;
  const std::string name =
      o.name.empty() ? fs::path(o.pred).stem().string() : o.name;
  Check(cl_eval_report(gold.get(), pred.get(), name.c_str(), avg, &text));
  const std::string report = Take(text);
  std::cout << report;
  if (!o.out.empty()) WriteText(o.out, report);
  if (o.table) {
    Check(cl_eval_table(gold.get(), pred.get(), &text));
    std::cout << '\n' << Take(text);
  }
}

std::vector<const char*> Pointers(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

void RunBleu(const Options& o) {
  Require(o.hyp, "hyp");
  Require(o.ref, "ref");
  auto hyp = ReadLines(o.hyp);
  auto ref = ReadLines(o.ref);
  auto hp = Pointers(hyp), rp = Pointers(ref);
  if (hyp.size() != ref.size()) {
    throw Failure{kExitData, o.hyp + ":" + std::to_string(std::min(hyp.size(), ref.size()) + 1) +
                                 ": " + std::to_string(hyp.size()) + " hypotheses vs " +
                                 std::to_string(ref.size()) + " references"};
  }
  double bleu = 0.0;
  Check(cl_bleu(hp.data(), rp.data(), hyp.size(), o.max_n, &bleu));
  std::cout << "bleu " << Fixed(bleu, 4) << '\n';
  std::cout << "bleu_x100 " << Fixed(100.0 * bleu, 2) << '\n';
  std::cout << "sentences " << hyp.size() << '\n';
}

void RunKappa(const Options& o) {
  Require(o.a, "a");
  Require(o.b, "b");
  auto a = ReadLines(o.a);
  auto b = ReadLines(o.b);
  auto ap = Pointers(a), bp = Pointers(b);
  double k = 0.0;
  Check(cl_kappa(ap.data(), bp.data(), a.size(), &k));
  std::cout << "kappa " << Fixed(k, 4) << '\n';
  std::cout << "items " << a.size() << '\n';
}

void RunHumanEval(const Options& o) {
  Require(o.in, "in");
  char* text = nullptr;
  Check(cl_human_eval(o.in.c_str(), &text));
  Emit(o.out, Take(text));
}

void RunAugment(const Options& o) {
  Require(o.in, "in");
  Require(o.out, "out");
  const std::uint64_t seed = RequireSeed(o.seed);
  CorpusPtr input = ReadCorpus(o.in, o.format, o.tagset);
  EntPtr entities;
  if (!o.entities.empty()) {
    cl_entity_lexicon* e = nullptr;
    Check(cl_entity_lexicon_load(o.entities.c_str(), &e));
    entities.reset(e);
  }
  if (cl_corpus_get_kind(input.get()) == CL_CORPUS_TAGGED) {
    // Labelled data: named-entity substitution keeps the tags.
    if (!entities) throw Usage("tagged input needs --entities for NE substitution");
    cl_corpus* c = nullptr;
    Check(cl_ne_substitute(input.get(), entities.get(), o.multiplier, seed, &c));
    CorpusPtr result(c);
    Check(cl_corpus_write(result.get(), CL_FORMAT_CONLL, o.out.c_str()));
    std::cout << "originals " << cl_corpus_size(input.get()) << '\n';
    std::cout << "total " << cl_corpus_size(result.get()) << '\n';
    return;
  }
  cl_augment_plan plan;
  cl_augment_plan_default(&plan);
  plan.techniques = 0;
  for (const auto& t : SplitList(o.techniques)) {
    if (t == "embedding") plan.techniques |= CL_TECH_EMBEDDING;
    else if (t == "lexicon") plan.techniques |= CL_TECH_LEXICON;
    else if (t == "charswap") plan.techniques |= CL_TECH_CHARSWAP;
    else if (t == "ne") plan.techniques |= CL_TECH_NE;
    else throw Usage("unknown technique '" + t + "' (expected embedding|lexicon|charswap|ne)");
  }
  plan.charswap_ops = 0;
  for (const auto& op : SplitList(o.charswap_ops)) {
    if (op == "substitute") plan.charswap_ops |= CL_CHAR_SUBSTITUTE;
    else if (op == "delete") plan.charswap_ops |= CL_CHAR_DELETE;
    else if (op == "insert") plan.charswap_ops |= CL_CHAR_INSERT;
    else if (op == "swap") plan.charswap_ops |= CL_CHAR_SWAP;
    else throw Usage("unknown character edit '" + op + "'");
  }
  plan.multiplier = o.multiplier;
  plan.seed = seed;
  plan.cosine_threshold = o.threshold;
  plan.charswap_edits = o.edits;
  plan.max_replacements = o.max_replacements;
  EmbPtr emb;
  if (!o.embeddings.empty()) {
    cl_embeddings* e = nullptr;
    Check(cl_embeddings_load(o.embeddings.c_str(), &e));
    emb.reset(e);
  }
  LexPtr lex;
  if (!o.lexicon.empty()) {
    cl_lexicon* l = nullptr;
    Check(cl_lexicon_load(o.lexicon.c_str(), &l));
    lex.reset(l);
  }
  cl_corpus* c = nullptr;
  char* report = nullptr;
  Check(cl_augment(input.get(), &plan, emb.get(), lex.get(), entities.get(), &c, &report));
  CorpusPtr result(c);
  std::cout << Take(report);
  Check(cl_corpus_write(result.get(), CL_FORMAT_TEXT, o.out.c_str()));
}

void RunFt(const Options& o) {
  Require(o.in, "in");
  Require(o.out, "out");
  if (o.translator.empty()) throw Usage("give the translator command after '--'");
  CorpusPtr input = ReadCorpus(o.in, o.format, o.tagset);
  auto argv = Pointers(o.translator);
  std::size_t run = 0, skipped = 0, pairs = 0;
  Check(cl_ft_run(input.get(), argv.data(), argv.size(), o.shard_size, !o.no_resume,
                  o.out.c_str(), &run, &skipped, &pairs));
  std::cout << "shards_run " << run << '\n';
  std::cout << "shards_skipped " << skipped << '\n';
  std::cout << "pairs " << pairs << '\n';
}

cl_attr_method ParseMethod(const std::string& name) {
  if (name == "occlusion") return CL_ATTR_OCCLUSION;
  if (name == "leave-one-out") return CL_ATTR_LEAVE_ONE_OUT;
  if (name == "shapley-exact") return CL_ATTR_SHAPLEY_EXACT;
  if (name == "shapley-sampled") return CL_ATTR_SHAPLEY_SAMPLED;
  throw Usage("unknown method '" + name +
              "' (expected occlusion|leave-one-out|shapley-exact|shapley-sampled)");
}

void RunAttribute(const Options& o) {
  Require(o.model, "model");
  const cl_attr_method method = ParseMethod(o.method);
  std::string text = o.text;
  std::string id = o.id;
  if (text.empty()) {
    Require(o.in, "in");
    if (o.phrase == 0) throw Usage("--phrase (1-based line of --in) is required with --in");
    auto lines = ReadLines(o.in);
    if (o.phrase > lines.size()) {
      throw Failure{kExitData, o.in + ": has only " + std::to_string(lines.size()) +
                                   " lines, --phrase " + std::to_string(o.phrase)};
    }
    text = lines[o.phrase - 1];
    if (id.empty()) id = std::to_string(o.phrase);
  }
  if (id.empty()) id = "1";
  std::uint64_t seed = 0;
  if (method == CL_ATTR_SHAPLEY_SAMPLED) seed = RequireSeed(o.seed);
  TaggerPtr tagger = LoadTagger(o.model);
  cl_attribution* m = nullptr;
  Check(cl_attribute(tagger.get(), id.c_str(), text.c_str(), o.position,
                     o.label.empty() ? nullptr : o.label.c_str(), method, o.samples, seed,
                     o.signs, &m));
  AttrPtr map(m);
  if (!o.out.empty()) Check(cl_attribution_save(map.get(), o.out.c_str()));
  std::cout << "target " << o.position << ' ' << cl_attribution_label(map.get()) << '\n';
  std::istringstream tokens(text);
  std::string token;
  for (std::size_t i = 0; tokens >> token; ++i) {
    double s = 0.0;
    Check(cl_attribution_score(map.get(), i, &s));
    std::cout << "token " << i << ' ' << token << ' ' << Fixed(s, 6) << '\n';
  }
  if (!o.annotations.empty()) {
    // phrase_id<TAB>idx,idx,...
    std::vector<std::size_t> marked;
    bool found = false;
    auto lines = ReadLines(o.annotations);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const std::string& line = lines[n];
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (line.substr(0, tab) != id) continue;
      found = true;
      if (tab == std::string::npos) break;
      for (const auto& idx : SplitList(line.substr(tab + 1))) {
        try {
          std::size_t used = 0;
          marked.push_back(std::stoull(idx, &used));
          if (used != idx.size()) throw std::invalid_argument(idx);
        } catch (const std::exception&) {
          throw Failure{kExitData, o.annotations + ":" + std::to_string(n + 1) +
                                       ": bad token index '" + idx + "'"};
        }
      }
      break;
    }
    if (!found) {
      throw Failure{kExitData, o.annotations + ": no annotation for phrase '" + id + "'"};
    }
    double p = 0.0;
    Check(cl_plausibility(map.get(), marked.data(), marked.size(), &p));
    std::cout << "plausibility " << Fixed(p, 4) << '\n';
  }
}

void RunRender(const Options& o) {
  if (o.inputs.empty()) throw Usage("render needs at least one attribution file");
  if (o.format != "html" && o.format != "ansi" && o.format != "auto") {
    throw Usage("unknown render format '" + o.format + "' (expected html|ansi)");
  }
  std::vector<AttrPtr> maps;
  std::vector<const cl_attribution*> raw;
  for (const auto& path : o.inputs) {
    cl_attribution* m = nullptr;
    Check(cl_attribution_load(path.c_str(), &m));
    maps.emplace_back(m);
    raw.push_back(m);
  }
  auto marks = SplitList(o.correctness);
  if (marks.size() != 1 && marks.size() != raw.size()) {
    throw Usage("--correctness takes one value or one per input");
  }
  std::vector<cl_correctness> correctness;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string& m = marks.size() == 1 ? marks[0] : marks[i];
    if (m == "correct") correctness.push_back(CL_CORRECT);
    else if (m == "wrong") correctness.push_back(CL_WRONG);
    else if (m == "unknown") correctness.push_back(CL_UNKNOWN);
    else throw Usage("unknown correctness '" + m + "' (expected correct|wrong|unknown)");
  }
  char* text = nullptr;
  Check(cl_render(raw.data(), correctness.data(), raw.size(), o.format != "ansi", &text));
  Emit(o.out, Take(text));
}

void RunReport(const Options& o) {
  auto paths = Pointers(o.inputs);
  char* text = nullptr;
  Check(cl_report(paths.data(), paths.size(), &text));
  Emit(o.out, Take(text));
}

// Value of --config, found before the real parse so the file can seed
// option defaults.
std::string FindConfig(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--") break;
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  Registry reg;
  CLI::App app{"Sequence labelling, evaluation, augmentation and attribution for "
               "transliterated cuneiform corpora"};
  app.set_version_flag("--version", std::string(cl_version()));
  app.add_option("--config", o.config, "Config file of 'key = value' lines");
  app.require_subcommand(1);

  auto* prepare = app.add_subcommand("prepare", "Read or generate a corpus, optionally split it");
  reg.Path(prepare, "in", o.in, "Input corpus");
  reg.Path(prepare, "target", o.target, "Line-aligned target file (parallel input)");
  reg.Opt(prepare, "format", o.format, "auto|native|conll|text|parallel");
  reg.Opt(prepare, "tagset", o.tagset, "pos|ner");
  reg.Opt(prepare, "synthetic", o.synthetic, "Generate this many synthetic tagged phrases");
  reg.Opt(prepare, "lexical-noise", o.lexical_noise, "Synthetic lexical noise rate");
  reg.Opt(prepare, "label-noise", o.label_noise, "Synthetic label noise rate");
  reg.Flag(prepare, "comp", o.comp, "Merge parallel segments into complete sentences");
  reg.Opt(prepare, "test-fraction", o.test_fraction, "Held-out share; 0 keeps one corpus");
  reg.Opt(prepare, "seed", o.seed, "Random seed");
  reg.Path(prepare, "out", o.out, "Output directory");

  auto* lint = app.add_subcommand("rules-lint", "Show which rules fire on which tokens");
  reg.Path(lint, "rules", o.rules, "Rules TSV (default: built-in rules)");
  reg.Path(lint, "in", o.in, "Corpus to scan");
  reg.Opt(lint, "format", o.format, "auto|native|conll|text|parallel");
  reg.Opt(lint, "tagset", o.tagset, "pos|ner");
  reg.Path(lint, "out", o.out, "Report file (default stdout)");

  auto* hmm = app.add_subcommand("train-hmm", "Train the HMM baseline");
  reg.Path(hmm, "train", o.train, "Tagged training corpus");
  reg.Opt(hmm, "format", o.format, "auto|native|conll");
  reg.Opt(hmm, "tagset", o.tagset, "pos|ner");
  reg.Opt(hmm, "smoothing", o.smoothing, "Add-k smoothing constant");
  reg.Path(hmm, "out", o.out, "Model file");

  auto* crf = app.add_subcommand("train-crf", "Train the CRF tagger");
  reg.Path(crf, "train", o.train, "Tagged training corpus");
  reg.Opt(crf, "format", o.format, "auto|native|conll");
  reg.Opt(crf, "tagset", o.tagset, "pos|ner");
  reg.Path(crf, "rules", o.rules, "Rules TSV (default: built-in rules)");
  reg.Flag(crf, "no-rules", o.no_rules, "Train without rule features");
  reg.Opt(crf, "templates", o.templates, "Comma list of feature templates");
  reg.Opt(crf, "l2", o.l2, "Gaussian prior variance");
  reg.Opt(crf, "max-iters", o.max_iters, "Optimizer iteration cap");
  reg.Opt(crf, "grad-tol", o.grad_tol, "Stop when the gradient max-norm is below this");
  reg.Opt(crf, "threads", o.threads, "Gradient threads");
  reg.Opt(crf, "optimizer", o.optimizer, "lbfgs|gd");
  reg.Flag(crf, "verbose", o.verbose, "Print optimizer progress");
  reg.Path(crf, "out", o.out, "Model file");

  auto* tag = app.add_subcommand("tag", "Tag phrases; CoNLL on stdout");
  reg.Path(tag, "model", o.model, "Model file (HMM or CRF)");
  reg.Path(tag, "in", o.in, "Phrases to tag");
  reg.Opt(tag, "format", o.format, "auto|native|conll|text|parallel");
  CLI::Option* tagset_opt = reg.Opt(tag, "tagset", o.tagset, "Expected tagset of the model");
  reg.Path(tag, "out", o.out, "Output file (default stdout)");

  auto* eval = app.add_subcommand("eval", "Precision, recall and F1 against gold CoNLL");
  reg.Path(eval, "gold", o.gold, "Gold CoNLL");
  reg.Path(eval, "pred", o.pred, "Predicted CoNLL");
  reg.Opt(eval, "tagset", o.tagset, "pos|ner");
  reg.Opt(eval, "avg", o.avg, "weighted|micro|per-class");
  reg.Opt(eval, "name", o.name, "Model name recorded in the result");
  reg.Flag(eval, "table", o.table, "Also print the per-class table");
  reg.Path(eval, "out", o.out, "Result file for `report`");

  auto* bleu = app.add_subcommand("bleu", "Corpus BLEU of line-aligned files");
  reg.Path(bleu, "hyp", o.hyp, "Hypotheses, one per line");
  reg.Path(bleu, "ref", o.ref, "References, one per line");
  reg.Opt(bleu, "max-n", o.max_n, "Highest n-gram order");

  auto* kappa = app.add_subcommand("kappa", "Cohen's kappa of two label files");
  reg.Path(kappa, "a", o.a, "Labels of the first annotator, one per line");
  reg.Path(kappa, "b", o.b, "Labels of the second annotator, one per line");

  auto* human = app.add_subcommand("human-eval", "Aggregate human ratings");
  reg.Path(human, "in", o.in, "TSV model<TAB>example<TAB>annotator<TAB>score");
  reg.Path(human, "out", o.out, "Report file (default stdout)");

  auto* augment = app.add_subcommand("augment", "Augment monolingual or tagged data");
  reg.Path(augment, "in", o.in, "Lines (text) or tagged corpus (CoNLL)");
  reg.Opt(augment, "format", o.format, "auto|native|conll|text");
  reg.Opt(augment, "tagset", o.tagset, "pos|ner");
  reg.Opt(augment, "techniques", o.techniques, "Comma list of embedding,lexicon,charswap,ne");
  reg.Opt(augment, "multiplier", o.multiplier, "Variants per technique and line");
  reg.Opt(augment, "threshold", o.threshold, "Cosine threshold for embedding neighbours");
  reg.Path(augment, "embeddings", o.embeddings, "word2vec text embeddings");
  reg.Path(augment, "lexicon", o.lexicon, "Synonym TSV");
  reg.Path(augment, "entities", o.entities, "Entity lexicon TSV LABEL<TAB>surface");
  reg.Opt(augment, "charswap-ops", o.charswap_ops, "Comma list of substitute,delete,insert,swap");
  reg.Opt(augment, "edits", o.edits, "Character edits per variant");
  reg.Opt(augment, "max-replacements", o.max_replacements, "Words replaced per variant");
  reg.Opt(augment, "seed", o.seed, "Random seed");
  reg.Path(augment, "out", o.out, "Output file");

  auto* ft = app.add_subcommand("ft-run", "Forward-translate monolingual lines in shards");
  reg.Path(ft, "in", o.in, "Monolingual lines");
  reg.Opt(ft, "format", o.format, "auto|native|text");
  reg.Opt(ft, "shard-size", o.shard_size, "Lines per shard");
  reg.Flag(ft, "no-resume", o.no_resume, "Ignore an existing manifest");
  reg.Path(ft, "out", o.out, "Output directory");
  ft->add_option("translator", o.translator, "Translator command, after '--'");

  auto* attribute = app.add_subcommand("attribute", "Explain one tagging decision");
  reg.Path(attribute, "model", o.model, "Model file");
  reg.Opt(attribute, "text", o.text, "Phrase text");
  reg.Path(attribute, "in", o.in, "Text file to take the phrase from");
  reg.Opt(attribute, "phrase", o.phrase, "1-based line of --in");
  reg.Opt(attribute, "id", o.id, "Phrase id (default: line number or 1)");
  reg.Opt(attribute, "position", o.position, "0-based token position to explain");
  reg.Opt(attribute, "label", o.label, "Label to explain (default: predicted)");
  reg.Opt(attribute, "method", o.method,
          "occlusion|leave-one-out|shapley-exact|shapley-sampled");
  reg.Opt(attribute, "samples", o.samples, "Permutations for sampled Shapley");
  reg.Opt(attribute, "seed", o.seed, "Random seed (sampled Shapley)");
  reg.Flag(attribute, "signs", o.signs, "Add sign-level occlusion");
  reg.Path(attribute, "annotations", o.annotations,
           "TSV phrase_id<TAB>idx,... to score plausibility");
  reg.Path(attribute, "out", o.out, "Attribution file");

  auto* render = app.add_subcommand("render", "Render attribution files");
  render->add_option("inputs", o.inputs, "Attribution files")->required();
  reg.Opt(render, "format", o.format, "html|ansi");
  reg.Opt(render, "correctness", o.correctness, "correct|wrong|unknown, one or one per input");
  reg.Path(render, "out", o.out, "Output file (default stdout)");

  auto* report = app.add_subcommand("report", "Compare eval result files");
  report->add_option("inputs", o.inputs, "Result files written by eval");
  reg.Path(report, "out", o.out, "Output file (default stdout)");

  try {
    const std::string config_path = FindConfig(argc, argv);
    if (!config_path.empty()) {
      std::set<std::string> allowed;
      for (const auto& [name, opts] : reg.options) allowed.insert(name);
      auto entries = cuneilab::cli::LoadConfig(config_path, allowed, reg.path_keys);
      for (const auto& [key, entry] : entries) {
        for (CLI::Option* opt : reg.options.at(key)) {
          try {
            opt->default_val(entry.value);
          } catch (const CLI::Error& e) {
            throw Failure{kExitData, config_path + ":" + std::to_string(entry.line) +
                                         ": bad value for '" + key + "': " + e.what()};
          }
        }
      }
    }
  } catch (const cuneilab::cli::ConfigError& e) {
    std::cerr << "cuneilab: error: " << e.what() << '\n';
    return kExitData;
  } catch (const Failure& f) {
    std::cerr << "cuneilab: error: " << f.message << '\n';
    return f.exit_code;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (prepare->parsed()) RunPrepare(o);
    else if (lint->parsed()) RunRulesLint(o);
    else if (hmm->parsed()) RunTrainHmm(o);
    else if (crf->parsed()) RunTrainCrf(o);
    else if (tag->parsed()) RunTag(o, tagset_opt->count() > 0);
    else if (eval->parsed()) RunEval(o);
    else if (bleu->parsed()) RunBleu(o);
    else if (kappa->parsed()) RunKappa(o);
    else if (human->parsed()) RunHumanEval(o);
    else if (augment->parsed()) RunAugment(o);
    else if (ft->parsed()) RunFt(o);
    else if (attribute->parsed()) RunAttribute(o);
    else if (render->parsed()) RunRender(o);
    else if (report->parsed()) RunReport(o);
  } catch (const Failure& f) {
    std::cerr << "cuneilab: error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "cuneilab: error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
