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

#include "cuneilab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include "cuneilab/error.hpp"
#include "text_util.hpp"

namespace cuneilab {

using internal::FormatFixed;

// --- Confusion / PRF ----------------------------------------------------

ConfusionMatrix::ConfusionMatrix(TagSet tagset)
    : tagset_(std::move(tagset)), counts_(tagset_.size() * tagset_.size(), 0) {}

void ConfusionMatrix::Add(int gold, int pred, std::size_t count) {
  const auto n = static_cast<int>(tagset_.size());
  if (gold < 0 || gold >= n || pred < 0 || pred >= n) {
    throw Error(ErrorCode::kTagOutsideTagset, "confusion cell out of range");
  }
  counts_[static_cast<std::size_t>(gold * n + pred)] += count;
  total_ += count;
}

std::size_t ConfusionMatrix::At(int gold, int pred) const {
  return counts_[static_cast<std::size_t>(gold) * tagset_.size() +
                 static_cast<std::size_t>(pred)];
}

std::size_t ConfusionMatrix::Correct() const {
  std::size_t c = 0;
  for (std::size_t t = 0; t < tagset_.size(); ++t) {
    c += At(static_cast<int>(t), static_cast<int>(t));
  }
  return c;
}

std::size_t ConfusionMatrix::GoldSupport(int tag) const {
  std::size_t c = 0;
  for (std::size_t p = 0; p < tagset_.size(); ++p) c += At(tag, static_cast<int>(p));
  return c;
}

std::size_t ConfusionMatrix::Predicted(int tag) const {
  std::size_t c = 0;
  for (std::size_t g = 0; g < tagset_.size(); ++g) c += At(static_cast<int>(g), tag);
  return c;
}

ConfusionMatrix Confusion(const std::vector<TaggedPhrase>& gold,
                          const std::vector<TaggedPhrase>& pred,
                          const TagSet& tagset) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kAlignmentMismatch,
                std::to_string(gold.size()) + " gold vs " +
                    std::to_string(pred.size()) + " predicted phrases");
  }
  ConfusionMatrix cm(tagset);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].tags.size() != pred[i].tags.size()) {
      throw Error(ErrorCode::kAlignmentMismatch,
                  "phrase " + std::to_string(i + 1) + " differs in length");
    }
    if (gold[i].phrase.Surfaces() != pred[i].phrase.Surfaces()) {
      throw Error(ErrorCode::kAlignmentMismatch,
                  "phrase " + std::to_string(i + 1) + " has different tokens");
    }
    for (std::size_t j = 0; j < gold[i].tags.size(); ++j) {
      cm.Add(gold[i].tags[j], pred[i].tags[j]);
    }
  }
  return cm;
}

namespace {

double Ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

PrfReport Prf1(const ConfusionMatrix& cm, Averaging averaging) {
  PrfReport report;
  report.averaging = averaging;
  report.scored = cm.Total();
  report.errors = cm.Total() - cm.Correct();
  const std::size_t n = cm.tagset().size();
  double total_support = 0.0;
  double wp = 0.0, wr = 0.0, wf = 0.0;
  double mp = 0.0, mr = 0.0, mf = 0.0;
  std::size_t supported = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const int tag = static_cast<int>(t);
    ClassScores cs;
    cs.label = cm.tagset().Label(tag);
    const auto tp = static_cast<double>(cm.At(tag, tag));
    cs.support = cm.GoldSupport(tag);
    cs.precision = Ratio(tp, static_cast<double>(cm.Predicted(tag)));
    cs.recall = Ratio(tp, static_cast<double>(cs.support));
    cs.f1 = Ratio(2.0 * cs.precision * cs.recall, cs.precision + cs.recall);
    if (cs.support > 0) {
      const auto s = static_cast<double>(cs.support);
      total_support += s;
      wp += s * cs.precision;
      wr += s * cs.recall;
      wf += s * cs.f1;
      mp += cs.precision;
      mr += cs.recall;
      mf += cs.f1;
      ++supported;
    }
    report.per_class.push_back(cs);
  }
  switch (averaging) {
    case Averaging::kMicro: {
      double acc = Ratio(static_cast<double>(cm.Correct()),
                         static_cast<double>(cm.Total()));
      report.precision = report.recall = report.f1 = acc;
      break;
    }
    case Averaging::kWeighted:
      report.precision = Ratio(wp, total_support);
      report.recall = Ratio(wr, total_support);
      report.f1 = Ratio(wf, total_support);
      break;
    case Averaging::kPerClass: {
      const auto k = static_cast<double>(supported);
      report.precision = Ratio(mp, k);
      report.recall = Ratio(mr, k);
      report.f1 = Ratio(mf, k);
      break;
    }
  }
  return report;
}

PrfReport Prf1(const std::vector<TaggedPhrase>& gold,
               const std::vector<TaggedPhrase>& pred, const TagSet& tagset,
               Averaging averaging) {
  return Prf1(Confusion(gold, pred, tagset), averaging);
}

std::string FormatPrfTable(const ConfusionMatrix& confusion) {
  std::size_t width = 9;
  for (const auto& label : confusion.tagset().labels()) {
    width = std::max(width, label.size());
  }
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  std::ostringstream out;
  out << pad("label", width) << "  " << pad("precision", 10) << pad("recall", 10)
      << pad("f1", 10) << "support\n";
  auto row = [&](const std::string& name, double p, double r, double f,
                 std::size_t support) {
    out << pad(name, width) << "  " << pad(FormatFixed(p, 4), 10)
        << pad(FormatFixed(r, 4), 10) << pad(FormatFixed(f, 4), 10) << support
        << '\n';
  };
  PrfReport per = Prf1(confusion, Averaging::kPerClass);
  for (const auto& c : per.per_class) {
    if (c.support > 0 || confusion.Predicted(*confusion.tagset().IndexOf(c.label)) > 0) {
      row(c.label, c.precision, c.recall, c.f1, c.support);
    }
  }
  for (Averaging a : {Averaging::kPerClass, Averaging::kMicro, Averaging::kWeighted}) {
    PrfReport r = Prf1(confusion, a);
    row(std::string(AveragingName(a)), r.precision, r.recall, r.f1, r.scored);
  }
  return out.str();
}

double ErrorRatePercent(std::size_t wrong, std::size_t scored) {
  if (scored == 0) throw Error(ErrorCode::kEmptyInput, "no scored words");
  if (wrong > scored) {
    throw Error(ErrorCode::kInvalidArgument, "more errors than scored words");
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(scored);
}

// --- BLEU ---------------------------------------------------------------

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n))]++;
  }
  return counts;
}

struct BleuStats {
  std::vector<double> matches;
  std::vector<double> totals;
  double hyp_len = 0.0;
  double ref_len = 0.0;
};

void AddStats(BleuStats& stats, const std::string& hyp, const std::string& ref,
              int max_n) {
  auto h = internal::SplitWhitespace(hyp);
  auto r = internal::SplitWhitespace(ref);
  stats.hyp_len += static_cast<double>(h.size());
  stats.ref_len += static_cast<double>(r.size());
  for (int n = 1; n <= max_n; ++n) {
    NgramCounts hc = CountNgrams(h, static_cast<std::size_t>(n));
    NgramCounts rc = CountNgrams(r, static_cast<std::size_t>(n));
    for (const auto& [gram, count] : hc) {
      auto it = rc.find(gram);
      std::size_t clip = it == rc.end() ? 0 : std::min(count, it->second);
      stats.matches[static_cast<std::size_t>(n - 1)] += static_cast<double>(clip);
      stats.totals[static_cast<std::size_t>(n - 1)] += static_cast<double>(count);
    }
  }
}

double BleuFromStats(const BleuStats& stats, int max_n, bool smooth) {
  if (stats.hyp_len == 0.0) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const double m = stats.matches[static_cast<std::size_t>(n - 1)];
    const double t = stats.totals[static_cast<std::size_t>(n - 1)];
    if (t == 0.0) continue;
    double p = (smooth && n >= 2) ? (m + 1.0) / (t + 1.0) : m / t;
    if (p == 0.0) return 0.0;
    log_sum += std::log(p);
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double bp = std::exp(std::min(0.0, 1.0 - stats.ref_len / stats.hyp_len));
  return bp * std::exp(log_sum / orders);
}

}  // namespace

double CorpusBleu(const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references, int max_n) {
  if (hypotheses.size() != references.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(hypotheses.size()) + " hypotheses vs " +
                    std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) throw Error(ErrorCode::kEmptyInput, "no sentences");
  if (max_n < 1) throw Error(ErrorCode::kInvalidArgument, "max_n must be >= 1");
  BleuStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_n), 0.0);
  stats.totals.assign(static_cast<std::size_t>(max_n), 0.0);
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    AddStats(stats, hypotheses[i], references[i], max_n);
  }
  return BleuFromStats(stats, max_n, false);
}

double SentenceBleu(const std::string& hypothesis, const std::string& reference,
                    int max_n) {
  if (max_n < 1) throw Error(ErrorCode::kInvalidArgument, "max_n must be >= 1");
  BleuStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_n), 0.0);
  stats.totals.assign(static_cast<std::size_t>(max_n), 0.0);
  AddStats(stats, hypothesis, reference, max_n);
  return BleuFromStats(stats, max_n, true);
}

// --- Kappa --------------------------------------------------------------

double CohenKappa(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                    " labels");
  }
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "no labels");
  const auto n = static_cast<double>(a.size());
  std::map<std::string, double> ca, cb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, count] : ca) {
    auto it = cb.find(label);
    if (it != cb.end()) p_e += (count / n) * (it->second / n);
  }
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

// --- Human evaluation ---------------------------------------------------

double HumanEvalReport::MeanKappa() const {
  if (pairwise_kappa.empty()) return 0.0;
  double s = 0.0;
  for (const auto& [pair, k] : pairwise_kappa) s += k;
  return s / static_cast<double>(pairwise_kappa.size());
}

std::string HumanEvalReport::Format() const {
  std::ostringstream out;
  std::size_t width = 5;
  for (const auto& [model, mean] : model_means) width = std::max(width, model.size());
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  out << pad("model", width) << "  " << pad("n", 6) << "mean\n";
  for (const auto& [model, mean] : model_means) {
    out << pad(model, width) << "  " << pad(std::to_string(model_counts.at(model)), 6)
        << FormatFixed(mean, 3) << '\n';
  }
  if (!pairwise_kappa.empty()) {
    std::size_t aw = 11;
    for (const auto& [pair, k] : pairwise_kappa) {
      aw = std::max({aw, pair.first.size(), pair.second.size()});
    }
    out << '\n' << pad("annotator_a", aw) << "  " << pad("annotator_b", aw)
        << "  " << pad("overlap", 8) << "kappa\n";
    for (const auto& [pair, k] : pairwise_kappa) {
      out << pad(pair.first, aw) << "  " << pad(pair.second, aw) << "  "
          << pad(std::to_string(pairwise_overlap.at(pair)), 8)
          << FormatFixed(k, 4) << '\n';
    }
  }
  out << '\n';
  for (const auto& [model, mean] : model_means) {
    out << "mean." << model << ' ' << FormatFixed(mean, 3) << '\n';
  }
  for (const auto& [pair, k] : pairwise_kappa) {
    out << "kappa." << pair.first << '.' << pair.second << ' '
        << FormatFixed(k, 4) << '\n';
  }
  if (!pairwise_kappa.empty()) {
    out << "kappa.mean " << FormatFixed(MeanKappa(), 4) << '\n';
  }
  return out.str();
}

HumanEvalReport AggregateHumanEval(const std::vector<HumanEvalRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no records");
  HumanEvalReport report;
  std::map<std::string, double> sums;
  using Item = std::pair<std::string, std::string>;
  std::map<std::string, std::map<Item, int>> by_annotator;
  for (const auto& r : records) {
    if (r.score < kRubricMin || r.score > kRubricMax) {
      throw Error(ErrorCode::kScoreOutOfRange,
                  "score " + std::to_string(r.score) + " for " + r.model_id +
                      "/" + r.example_id);
    }
    sums[r.model_id] += r.score;
    report.model_counts[r.model_id] += 1;
    auto [it, inserted] =
        by_annotator[r.annotator_id].emplace(Item{r.model_id, r.example_id}, r.score);
    if (!inserted) {
      throw Error(ErrorCode::kInvalidArgument,
                  "annotator " + r.annotator_id + " rated " + r.model_id + "/" +
                      r.example_id + " twice");
    }
  }
  for (const auto& [model, sum] : sums) {
    report.model_means[model] = sum / static_cast<double>(report.model_counts[model]);
  }
  for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
    for (auto b = std::next(a); b != by_annotator.end(); ++b) {
      std::vector<std::string> la, lb;
      for (const auto& [item, score] : a->second) {
        auto it = b->second.find(item);
        if (it == b->second.end()) continue;
        la.push_back(std::to_string(score));
        lb.push_back(std::to_string(it->second));
      }
      if (la.empty()) {
        throw Error(ErrorCode::kNoOverlap,
                    "annotators " + a->first + " and " + b->first +
                        " share no rated examples");
      }
      report.pairwise_kappa[{a->first, b->first}] = CohenKappa(la, lb);
      report.pairwise_overlap[{a->first, b->first}] = la.size();
    }
  }
  return report;
}

std::vector<HumanEvalRecord> ReadHumanEval(std::istream& in,
                                           const std::string& source) {
  std::vector<HumanEvalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    auto f = internal::Split(line, '\t');
    if (f.size() != 4 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected model<TAB>example<TAB>annotator<TAB>score", line_no,
                  source);
    }
    std::uint64_t score = 0;
    try {
      score = internal::ParseUint(f[3], line_no, source);
    } catch (const Error&) {
      throw Error(ErrorCode::kScoreOutOfRange, "score '" + f[3] + "'", line_no,
                  source);
    }
    if (score < kRubricMin || score > kRubricMax) {
      throw Error(ErrorCode::kScoreOutOfRange, "score '" + f[3] + "'", line_no,
                  source);
    }
    records.push_back({f[0], f[1], f[2], static_cast<int>(score)});
  }
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no records", 0, source);
  return records;
}

// --- Eval result files --------------------------------------------------

std::string_view AveragingName(Averaging averaging) {
  switch (averaging) {
    case Averaging::kPerClass: return "per-class";
    case Averaging::kMicro: return "micro";
    case Averaging::kWeighted: return "weighted";
  }
  return "weighted";
}

Averaging ParseAveraging(std::string_view name) {
  if (name == "per-class" || name == "macro") return Averaging::kPerClass;
  if (name == "micro") return Averaging::kMicro;
  if (name == "weighted") return Averaging::kWeighted;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown averaging '" + std::string(name) +
                  "' (expected per-class|micro|weighted)");
}

namespace {

constexpr std::string_view kEvalMagic = "#cuneilab-eval v1";

}  // namespace

std::string FormatEvalResult(const EvalResult& r) {
  std::ostringstream out;
  out << kEvalMagic << '\n';
  out << "name " << r.name << '\n';
  out << "averaging " << r.averaging << '\n';
  out << "precision " << FormatFixed(r.precision, 4) << '\n';
  out << "recall " << FormatFixed(r.recall, 4) << '\n';
  out << "f1 " << FormatFixed(r.f1, 4) << '\n';
  out << "scored " << r.scored << '\n';
  out << "errors " << r.errors << '\n';
  if (r.scored > 0) {
    out << "error_rate_pct "
        << FormatFixed(ErrorRatePercent(r.errors, r.scored), 2) << '\n';
  }
  return out.str();
}

EvalResult ParseEvalResult(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || internal::Trim(line) != kEvalMagic) {
    throw Error(ErrorCode::kBadMagic, "not an eval result file", 1, source);
  }
  EvalResult r;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty()) continue;
    auto f = internal::SplitWhitespace(line);
    if (f.size() != 2) {
      throw Error(ErrorCode::kMalformedLine, "expected 'key value'", line_no,
                  source);
    }
    seen.insert(f[0]);
    if (f[0] == "name") {
      r.name = f[1];
    } else if (f[0] == "averaging") {
      r.averaging = f[1];
    } else if (f[0] == "precision") {
      r.precision = internal::ParseDouble(f[1], line_no, source);
    } else if (f[0] == "recall") {
      r.recall = internal::ParseDouble(f[1], line_no, source);
    } else if (f[0] == "f1") {
      r.f1 = internal::ParseDouble(f[1], line_no, source);
    } else if (f[0] == "scored") {
      r.scored = internal::ParseUint(f[1], line_no, source);
    } else if (f[0] == "errors") {
      r.errors = internal::ParseUint(f[1], line_no, source);
    } else if (f[0] != "error_rate_pct") {
      throw Error(ErrorCode::kMalformedLine, "unknown key '" + f[0] + "'",
                  line_no, source);
    }
  }
  for (const char* key : {"name", "precision", "recall", "f1"}) {
    if (!seen.count(key)) {
      throw Error(ErrorCode::kMalformedLine, std::string("missing '") + key + "'",
                  line_no, source);
    }
  }
  return r;
}

std::string FormatComparison(const std::vector<EvalResult>& results) {
  if (results.empty()) throw Error(ErrorCode::kNoInputs, "no eval results");
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.name.size());
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  std::ostringstream out;
  out << pad("model", width) << "  " << pad("averaging", 10) << "  "
      << pad("precision", 10) << pad("recall", 10) << "f1\n";
  for (const auto& r : results) {
    out << pad(r.name, width) << "  " << pad(r.averaging, 10) << "  "
        << pad(FormatFixed(r.precision, 4), 10)
        << pad(FormatFixed(r.recall, 4), 10) << FormatFixed(r.f1, 4) << '\n';
  }
  out << '\n';
  for (const auto& r : results) {
    out << "model." << r.name << ".precision " << FormatFixed(r.precision, 4) << '\n';
    out << "model." << r.name << ".recall " << FormatFixed(r.recall, 4) << '\n';
    out << "model." << r.name << ".f1 " << FormatFixed(r.f1, 4) << '\n';
  }
  auto best = std::max_element(results.begin(), results.end(),
                               [](const EvalResult& a, const EvalResult& b) {
                                 return a.f1 < b.f1;
                               });
  out << "best " << best->name << '\n';
  return out.str();
}

}  // namespace cuneilab
