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

#include "cuneilab/crf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "crf_lattice.hpp"
#include "cuneilab/error.hpp"
#include "log_math.hpp"
#include "text_util.hpp"

namespace cuneilab {

using internal::kNegInf;

// --- Templates ----------------------------------------------------------

std::string FeatureTemplate::Name() const {
  switch (kind) {
    case TemplateKind::kBias: return "bias";
    case TemplateKind::kWordIdentity: return "word";
    case TemplateKind::kSignIdentity:
      return "sign:" + std::string(param > 0 ? "+" : "") + std::to_string(param);
    case TemplateKind::kPrefix: return "prefix:" + std::to_string(param);
    case TemplateKind::kSuffix: return "suffix:" + std::to_string(param);
    case TemplateKind::kContainsDeterminative: return "det";
    case TemplateKind::kIsNumericSign: return "numeric";
    case TemplateKind::kRuleFeature: return "rules";
    case TemplateKind::kPrevWordIdentity: return "prev-word";
    case TemplateKind::kNextWordIdentity: return "next-word";
    case TemplateKind::kTagBigram: return "bigram";
  }
  return "bias";
}

FeatureTemplate FeatureTemplate::Parse(std::string_view name) {
  auto bad = [&] {
    return Error(ErrorCode::kInvalidArgument,
                 "unknown feature template '" + std::string(name) + "'");
  };
  std::string_view head = name;
  std::string_view arg;
  if (auto colon = name.find(':'); colon != std::string_view::npos) {
    head = name.substr(0, colon);
    arg = name.substr(colon + 1);
  }
  auto parse_int = [&]() {
    if (arg.empty()) throw bad();
    std::string_view digits = arg;
    int sign = 1;
    if (digits[0] == '+' || digits[0] == '-') {
      sign = digits[0] == '-' ? -1 : 1;
      digits.remove_prefix(1);
    }
    if (digits.size() != 1 || !std::isdigit(static_cast<unsigned char>(digits[0]))) {
      throw bad();
    }
    return sign * (digits[0] - '0');
  };
  const bool has_arg = !arg.empty() || name.find(':') != std::string_view::npos;
  auto no_arg = [&](TemplateKind kind) {
    if (has_arg) throw bad();
    return FeatureTemplate{kind, 0};
  };
  if (head == "bias") return no_arg(TemplateKind::kBias);
  if (head == "word") return no_arg(TemplateKind::kWordIdentity);
  if (head == "det") return no_arg(TemplateKind::kContainsDeterminative);
  if (head == "numeric") return no_arg(TemplateKind::kIsNumericSign);
  if (head == "rules") return no_arg(TemplateKind::kRuleFeature);
  if (head == "prev-word") return no_arg(TemplateKind::kPrevWordIdentity);
  if (head == "next-word") return no_arg(TemplateKind::kNextWordIdentity);
  if (head == "bigram") return no_arg(TemplateKind::kTagBigram);
  if (head == "sign") {
    int offset = parse_int();
    if (offset < -1 || offset > 1) throw bad();
    return {TemplateKind::kSignIdentity, offset};
  }
  if (head == "prefix" || head == "suffix") {
    int k = parse_int();
    if (k < 1 || k > 4) throw bad();
    return {head == "prefix" ? TemplateKind::kPrefix : TemplateKind::kSuffix, k};
  }
  throw bad();
}

std::vector<FeatureTemplate> DefaultTemplates() {
  std::vector<FeatureTemplate> out = {
      {TemplateKind::kBias, 0},
      {TemplateKind::kWordIdentity, 0},
      {TemplateKind::kSignIdentity, -1},
      {TemplateKind::kSignIdentity, 0},
      {TemplateKind::kSignIdentity, 1},
  };
  for (int k = 1; k <= 4; ++k) out.push_back({TemplateKind::kPrefix, k});
  for (int k = 1; k <= 4; ++k) out.push_back({TemplateKind::kSuffix, k});
  out.push_back({TemplateKind::kContainsDeterminative, 0});
  out.push_back({TemplateKind::kIsNumericSign, 0});
  out.push_back({TemplateKind::kRuleFeature, 0});
  out.push_back({TemplateKind::kPrevWordIdentity, 0});
  out.push_back({TemplateKind::kNextWordIdentity, 0});
  out.push_back({TemplateKind::kTagBigram, 0});
  return out;
}

namespace {

bool IsSurfaceRule(RuleKind kind) {
  return kind != RuleKind::kPrevEquals && kind != RuleKind::kNextEquals;
}

bool StartsWithDigit(const std::string& s) {
  return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]));
}

}  // namespace

std::vector<std::string> ExtractFeatureStrings(
    const std::vector<FeatureTemplate>& templates, const RuleSet& rules,
    const Phrase& phrase, std::size_t position) {
  const std::size_t n = phrase.tokens.size();
  if (position >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "position " + std::to_string(position) + " in a phrase of " +
                    std::to_string(n) + " tokens");
  }
  const Token& token = phrase.tokens[position];
  const bool masked = IsMask(token);
  std::vector<std::string> out;

  for (const FeatureTemplate& tmpl : templates) {
    switch (tmpl.kind) {
      case TemplateKind::kBias:
        out.push_back("b");
        break;
      case TemplateKind::kWordIdentity:
        if (!masked) out.push_back("w=" + token.surface);
        break;
      case TemplateKind::kSignIdentity: {
        auto target = static_cast<std::ptrdiff_t>(position) + tmpl.param;
        if (target < 0 || target >= static_cast<std::ptrdiff_t>(n)) break;
        const Token& other = phrase.tokens[static_cast<std::size_t>(target)];
        if (IsMask(other)) break;
        std::string prefix = "s[" + std::to_string(tmpl.param) + "]=";
        for (const Sign& sign : other.signs) {
          if (!sign.text.empty()) out.push_back(prefix + sign.text);
        }
        break;
      }
      case TemplateKind::kPrefix:
      case TemplateKind::kSuffix: {
        if (masked) break;
        std::vector<std::string> units = internal::Utf8Units(token.surface);
        auto k = static_cast<std::size_t>(tmpl.param);
        if (units.size() < k) break;
        std::string piece;
        if (tmpl.kind == TemplateKind::kPrefix) {
          for (std::size_t i = 0; i < k; ++i) piece += units[i];
          out.push_back("p" + std::to_string(k) + "=" + piece);
        } else {
          for (std::size_t i = units.size() - k; i < units.size(); ++i) {
            piece += units[i];
          }
          out.push_back("x" + std::to_string(k) + "=" + piece);
        }
        break;
      }
      case TemplateKind::kContainsDeterminative:
        if (!masked &&
            std::any_of(token.signs.begin(), token.signs.end(),
                        [](const Sign& s) {
                          return s.kind == SignKind::kDeterminative;
                        })) {
          out.push_back("det");
        }
        break;
      case TemplateKind::kIsNumericSign:
        if (!masked &&
            std::any_of(token.signs.begin(), token.signs.end(),
                        [](const Sign& s) { return StartsWithDigit(s.text); })) {
          out.push_back("num");
        }
        break;
      case TemplateKind::kRuleFeature:
        for (const Rule& rule : rules.rules()) {
          if (masked && IsSurfaceRule(rule.kind)) continue;
          if (RuleFires(rule, phrase, position)) out.push_back("r=" + rule.id);
        }
        break;
      case TemplateKind::kPrevWordIdentity:
        if (position == 0) {
          out.push_back("pw=<s>");
        } else if (!IsMask(phrase.tokens[position - 1])) {
          out.push_back("pw=" + phrase.tokens[position - 1].surface);
        }
        break;
      case TemplateKind::kNextWordIdentity:
        if (position + 1 == n) {
          out.push_back("nw=</s>");
        } else if (!IsMask(phrase.tokens[position + 1])) {
          out.push_back("nw=" + phrase.tokens[position + 1].surface);
        }
        break;
      case TemplateKind::kTagBigram:
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- Dictionary and model -----------------------------------------------

int FeatureDictionary::Intern(const std::string& feature) {
  auto [it, inserted] = ids_.emplace(feature, static_cast<int>(names_.size()));
  if (inserted) names_.push_back(feature);
  return it->second;
}

std::optional<int> FeatureDictionary::Find(const std::string& feature) const {
  auto it = ids_.find(feature);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

CrfModel::CrfModel(TagSet tagset, std::vector<FeatureTemplate> templates,
                   RuleSet rules, FeatureDictionary dictionary,
                   double l2_sigma2)
    : tagset_(std::move(tagset)),
      templates_(std::move(templates)),
      rules_(std::move(rules)),
      dictionary_(std::move(dictionary)),
      l2_sigma2_(l2_sigma2) {
  if (!(l2_sigma2_ > 0.0) || !std::isfinite(l2_sigma2_)) {
    throw Error(ErrorCode::kInvalidArgument, "l2 sigma^2 must be positive");
  }
  weights_.assign(num_weights(), 0.0);
}

bool CrfModel::has_transitions() const {
  return std::any_of(templates_.begin(), templates_.end(),
                     [](const FeatureTemplate& t) {
                       return t.kind == TemplateKind::kTagBigram;
                     });
}

FeatureVector CrfModel::Features(const Phrase& phrase,
                                 std::size_t position) const {
  FeatureVector ids;
  for (const std::string& f :
       ExtractFeatureStrings(templates_, rules_, phrase, position)) {
    if (auto id = dictionary_.Find(f)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// --- Lattice inference --------------------------------------------------

namespace internal {

Lattice BuildLattice(std::span<const double> weights, std::size_t num_tags,
                     std::size_t num_features,
                     const std::vector<std::vector<int>>& features) {
  Lattice lat;
  lat.length = features.size();
  lat.num_tags = num_tags;
  lat.state.assign(lat.length * num_tags, 0.0);
  for (std::size_t i = 0; i < lat.length; ++i) {
    double* row = &lat.state[i * num_tags];
    for (int f : features[i]) {
      const double* w = &weights[static_cast<std::size_t>(f) * num_tags];
      for (std::size_t t = 0; t < num_tags; ++t) row[t] += w[t];
    }
  }
  lat.trans = weights.subspan(num_features * num_tags, num_tags * num_tags);
  return lat;
}

ForwardBackward RunForwardBackward(const Lattice& lat) {
  const std::size_t n = lat.length;
  const std::size_t T = lat.num_tags;
  ForwardBackward fb;
  fb.alpha.assign(n * T, 0.0);
  fb.beta.assign(n * T, 0.0);
  std::vector<double> scratch(T);
  for (std::size_t t = 0; t < T; ++t) fb.alpha[t] = lat.State(0, t);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t b = 0; b < T; ++b) {
      for (std::size_t a = 0; a < T; ++a) {
        scratch[a] = fb.alpha[(i - 1) * T + a] + lat.Trans(a, b);
      }
      fb.alpha[i * T + b] = LogSumExp(scratch) + lat.State(i, b);
    }
  }
  for (std::size_t i = n - 1; i > 0; --i) {
    for (std::size_t a = 0; a < T; ++a) {
      for (std::size_t b = 0; b < T; ++b) {
        scratch[b] = lat.Trans(a, b) + lat.State(i, b) + fb.beta[i * T + b];
      }
      fb.beta[(i - 1) * T + a] = LogSumExp(scratch);
    }
  }
  fb.log_z = LogSumExp(std::span<const double>(&fb.alpha[(n - 1) * T], T));
  for (std::size_t t = 0; t < T; ++t) scratch[t] = lat.State(0, t) + fb.beta[t];
  fb.log_z_backward = LogSumExp(scratch);
  return fb;
}

double AccumulatePhrase(std::span<const double> weights, std::size_t num_tags,
                        std::size_t num_features, const CompiledPhrase& phrase,
                        std::span<double> gradient, bool use_transitions) {
  const std::size_t n = phrase.features.size();
  const std::size_t T = num_tags;
  Lattice lat = BuildLattice(weights, T, num_features, phrase.features);
  ForwardBackward fb = RunForwardBackward(lat);

  double gold = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gold += lat.State(i, static_cast<std::size_t>(phrase.gold[i]));
    if (i > 0) {
      gold += lat.Trans(static_cast<std::size_t>(phrase.gold[i - 1]),
                        static_cast<std::size_t>(phrase.gold[i]));
    }
  }
  if (gradient.empty()) return fb.log_z - gold;

  const std::size_t trans_offset = num_features * T;
  std::vector<double> node(T);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      node[t] = std::exp(fb.alpha[i * T + t] + fb.beta[i * T + t] - fb.log_z);
    }
    const auto gold_tag = static_cast<std::size_t>(phrase.gold[i]);
    for (int f : phrase.features[i]) {
      double* g = &gradient[static_cast<std::size_t>(f) * T];
      for (std::size_t t = 0; t < T; ++t) g[t] += node[t];
      g[gold_tag] -= 1.0;
    }
    if (use_transitions && i > 0) {
      for (std::size_t a = 0; a < T; ++a) {
        const double left = fb.alpha[(i - 1) * T + a] - fb.log_z;
        for (std::size_t b = 0; b < T; ++b) {
          gradient[trans_offset + a * T + b] += std::exp(
              left + lat.Trans(a, b) + lat.State(i, b) + fb.beta[i * T + b]);
        }
      }
      gradient[trans_offset +
               static_cast<std::size_t>(phrase.gold[i - 1]) * T + gold_tag] -=
          1.0;
    }
  }
  return fb.log_z - gold;
}

}  // namespace internal

namespace {

std::vector<std::vector<int>> PhraseFeatures(const CrfModel& model,
                                             const Phrase& phrase) {
  if (phrase.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty phrase");
  }
  std::vector<std::vector<int>> features(phrase.tokens.size());
  for (std::size_t i = 0; i < phrase.tokens.size(); ++i) {
    features[i] = model.Features(phrase, i);
  }
  return features;
}

internal::Lattice ModelLattice(const CrfModel& model, const Phrase& phrase) {
  return internal::BuildLattice(model.weights(), model.num_tags(),
                                model.num_features(),
                                PhraseFeatures(model, phrase));
}

}  // namespace

std::vector<std::vector<double>> StateScores(const CrfModel& model,
                                             const Phrase& phrase) {
  internal::Lattice lat = ModelLattice(model, phrase);
  std::vector<std::vector<double>> out(lat.length,
                                       std::vector<double>(lat.num_tags));
  for (std::size_t i = 0; i < lat.length; ++i) {
    for (std::size_t t = 0; t < lat.num_tags; ++t) out[i][t] = lat.State(i, t);
  }
  return out;
}

double PathScore(const CrfModel& model, const Phrase& phrase,
                 const std::vector<int>& tags) {
  if (tags.size() != phrase.tokens.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch, "path length differs");
  }
  internal::Lattice lat = ModelLattice(model, phrase);
  double score = 0.0;
  for (std::size_t i = 0; i < lat.length; ++i) {
    score += lat.State(i, static_cast<std::size_t>(tags[i]));
    if (i > 0) {
      score += lat.Trans(static_cast<std::size_t>(tags[i - 1]),
                         static_cast<std::size_t>(tags[i]));
    }
  }
  return score;
}

double LogPartition(const CrfModel& model, const Phrase& phrase) {
  return internal::RunForwardBackward(ModelLattice(model, phrase)).log_z;
}

CrfMarginals Marginals(const CrfModel& model, const Phrase& phrase) {
  internal::Lattice lat = ModelLattice(model, phrase);
  internal::ForwardBackward fb = internal::RunForwardBackward(lat);
  const std::size_t n = lat.length;
  const std::size_t T = lat.num_tags;
  CrfMarginals m;
  m.log_z = fb.log_z;
  m.log_z_backward = fb.log_z_backward;
  m.node.assign(n, std::vector<double>(T));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      m.node[i][t] = std::exp(fb.alpha[i * T + t] + fb.beta[i * T + t] - fb.log_z);
    }
  }
  m.edge.assign(n > 0 ? n - 1 : 0,
                std::vector<std::vector<double>>(T, std::vector<double>(T)));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t a = 0; a < T; ++a) {
      for (std::size_t b = 0; b < T; ++b) {
        m.edge[i][a][b] =
            std::exp(fb.alpha[i * T + a] + lat.Trans(a, b) +
                     lat.State(i + 1, b) + fb.beta[(i + 1) * T + b] - fb.log_z);
      }
    }
  }
  return m;
}

TagPath ViterbiCrf(const CrfModel& model, const Phrase& phrase) {
  internal::Lattice lat = ModelLattice(model, phrase);
  const std::size_t n = lat.length;
  const std::size_t T = lat.num_tags;
  std::vector<double> delta(n * T);
  std::vector<int> back(n * T, 0);
  for (std::size_t t = 0; t < T; ++t) delta[t] = lat.State(0, t);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t b = 0; b < T; ++b) {
      double best = kNegInf;
      int arg = 0;
      for (std::size_t a = 0; a < T; ++a) {
        double cand = delta[(i - 1) * T + a] + lat.Trans(a, b);
        if (cand > best) {
          best = cand;
          arg = static_cast<int>(a);
        }
      }
      delta[i * T + b] = best + lat.State(i, b);
      back[i * T + b] = arg;
    }
  }
  TagPath path;
  path.tags.assign(n, 0);
  double best = kNegInf;
  int arg = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (delta[(n - 1) * T + t] > best) {
      best = delta[(n - 1) * T + t];
      arg = static_cast<int>(t);
    }
  }
  path.score = delta[(n - 1) * T + static_cast<std::size_t>(arg)];
  path.tags[n - 1] = arg;
  for (std::size_t i = n - 1; i > 0; --i) {
    path.tags[i - 1] = back[i * T + static_cast<std::size_t>(path.tags[i])];
  }
  return path;
}

// --- Serialization ------------------------------------------------------

namespace {

constexpr std::string_view kCrfMagic = "#cuneilab-crf";

}  // namespace

void WriteCrf(const CrfModel& model, std::ostream& out) {
  using internal::FormatDouble;
  const auto& labels = model.tagset().labels();
  const std::size_t T = model.num_tags();
  const auto& w = model.weights();
  out << kCrfMagic << " v1\n";
  out << "tagset\t" << model.tagset().name() << '\n';
  out << "labels\t" << internal::Join(labels, "\t") << '\n';
  out << "l2_sigma2\t" << FormatDouble(model.l2_sigma2()) << '\n';
  out << "templates";
  for (const auto& t : model.templates()) out << '\t' << t.Name();
  out << '\n';
  for (const Rule& rule : model.rules().rules()) {
    out << "rule\t" << RuleKindName(rule.kind) << '\t' << rule.pattern << '\t'
        << rule.hint << '\t' << rule.id << '\n';
  }
  out << "features\t" << model.num_features() << '\n';
  for (std::size_t f = 0; f < model.num_features(); ++f) {
    out << "f\t" << model.dictionary().Name(static_cast<int>(f));
    for (std::size_t t = 0; t < T; ++t) out << '\t' << FormatDouble(w[f * T + t]);
    out << '\n';
  }
  for (std::size_t a = 0; a < T; ++a) {
    out << "transition\t" << labels[a];
    for (std::size_t b = 0; b < T; ++b) {
      out << '\t'
          << FormatDouble(w[model.TransitionIndex(static_cast<int>(a),
                                                  static_cast<int>(b))]);
    }
    out << '\n';
  }
}

CrfModel ReadCrf(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kBadMagic, "empty file", 1, source);
  }
  auto header = internal::SplitWhitespace(line);
  if (header.empty() || header[0] != kCrfMagic) {
    throw Error(ErrorCode::kBadMagic, "missing CRF header", 1, source);
  }
  if (header.size() != 2 || header[1] != "v1") {
    throw Error(ErrorCode::kUnsupportedVersion, line, 1, source);
  }
  auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedLine, why, line_no, source);
  };

  std::string tagset_name;
  std::optional<TagSet> tagset;
  double sigma2 = 10.0;
  std::vector<FeatureTemplate> templates;
  std::vector<Rule> rules;
  FeatureDictionary dict;
  std::vector<std::vector<double>> state_rows;
  std::vector<std::vector<double>> trans_rows;

  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto f = internal::Split(line, '\t');
      const std::string& key = f[0];
      if (key == "tagset") {
        if (f.size() != 2) throw malformed("tagset");
        tagset_name = f[1];
      } else if (key == "labels") {
        std::vector<std::string> labels(f.begin() + 1, f.end());
        if (labels == TagSet::Pos().labels()) {
          tagset = TagSet::Pos();
        } else if (labels == TagSet::Ner().labels()) {
          tagset = TagSet::Ner();
        } else {
          tagset = TagSet::Custom(tagset_name, labels);
        }
      } else if (key == "l2_sigma2") {
        if (f.size() != 2) throw malformed("l2_sigma2");
        sigma2 = internal::ParseDouble(f[1], line_no, source);
      } else if (key == "templates") {
        for (std::size_t i = 1; i < f.size(); ++i) {
          templates.push_back(FeatureTemplate::Parse(f[i]));
        }
      } else if (key == "rule") {
        if (f.size() != 5) throw malformed("rule");
        std::istringstream rule_line(line.substr(5));
        try {
          rules.push_back(ReadRules(rule_line, source).rules().at(0));
        } catch (const Error& e) {
          throw Error(e.code(), e.message(), line_no, source);
        }
      } else if (key == "features") {
        if (f.size() != 2) throw malformed("features");
      } else if (key == "f") {
        if (!tagset || f.size() != tagset->size() + 2) {
          throw malformed("feature row width");
        }
        if (dict.Intern(f[1]) != static_cast<int>(state_rows.size())) {
          throw Error(ErrorCode::kDuplicateId, "feature '" + f[1] + "'",
                      line_no, source);
        }
        std::vector<double> row;
        for (std::size_t i = 2; i < f.size(); ++i) {
          row.push_back(internal::ParseDouble(f[i], line_no, source));
        }
        state_rows.push_back(std::move(row));
      } else if (key == "transition") {
        if (!tagset || f.size() != tagset->size() + 2 ||
            tagset->IndexOf(f[1]) != static_cast<int>(trans_rows.size())) {
          throw malformed("transition row");
        }
        std::vector<double> row;
        for (std::size_t i = 2; i < f.size(); ++i) {
          row.push_back(internal::ParseDouble(f[i], line_no, source));
        }
        trans_rows.push_back(std::move(row));
      } else {
        throw malformed("unknown record '" + key + "'");
      }
    }
  } catch (const Error& e) {
    if (e.line() != 0) throw;
    throw Error(e.code(), e.message(), line_no, source);
  }
  if (!tagset || trans_rows.size() != tagset->size()) {
    throw Error(ErrorCode::kMalformedLine, "incomplete model", line_no, source);
  }
  CrfModel model(*tagset, std::move(templates), RuleSet(std::move(rules)),
                 std::move(dict), sigma2);
  auto& w = model.mutable_weights();
  const std::size_t T = model.num_tags();
  for (std::size_t f = 0; f < state_rows.size(); ++f) {
    for (std::size_t t = 0; t < T; ++t) w[f * T + t] = state_rows[f][t];
  }
  for (std::size_t a = 0; a < T; ++a) {
    for (std::size_t b = 0; b < T; ++b) {
      w[model.TransitionIndex(static_cast<int>(a), static_cast<int>(b))] =
          trans_rows[a][b];
    }
  }
  for (double v : w) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kMalformedLine, "non-finite weight", 0, source);
    }
  }
  return model;
}

void SaveCrf(const CrfModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteCrf(model, out);
  internal::WriteFile(path, out.str());
}

CrfModel LoadCrf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for reading", 0,
                path.string());
  }
  return ReadCrf(in, path.string());
}

}  // namespace cuneilab
