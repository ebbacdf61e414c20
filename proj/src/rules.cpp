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

#include "cuneilab/rules.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cuneilab/error.hpp"
#include "text_util.hpp"

namespace cuneilab {
namespace {

constexpr RuleKind kAllKinds[] = {RuleKind::kPrefix,     RuleKind::kSuffix,
                                  RuleKind::kContains,   RuleKind::kEquals,
                                  RuleKind::kPrevEquals, RuleKind::kNextEquals};

bool StartsWith(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

bool EndsWith(std::string_view s, std::string_view p) {
  return s.size() >= p.size() &&
         s.compare(s.size() - p.size(), p.size(), p) == 0;
}

bool HasControlChars(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c == '\t' || c == '\n' || c == '\r'; });
}

}  // namespace

std::string_view RuleKindName(RuleKind kind) {
  switch (kind) {
    case RuleKind::kPrefix: return "PREFIX";
    case RuleKind::kSuffix: return "SUFFIX";
    case RuleKind::kContains: return "CONTAINS";
    case RuleKind::kEquals: return "EQUALS";
    case RuleKind::kPrevEquals: return "PREV_EQUALS";
    case RuleKind::kNextEquals: return "NEXT_EQUALS";
  }
  return "EQUALS";
}

bool IsValidHint(std::string_view hint) {
  if (hint == "YEAR" || hint == "MONTH") return true;
  return TagSet::Pos().IndexOf(hint).has_value() ||
         TagSet::Ner().IndexOf(hint).has_value();
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string> ids;
  for (const Rule& rule : rules_) {
    if (rule.pattern.empty() || HasControlChars(rule.pattern)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rule '" + rule.id + "' has an invalid pattern");
    }
    if (!IsValidHint(rule.hint)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rule '" + rule.id + "' has unknown hint '" + rule.hint + "'");
    }
    if (rule.id.empty() || HasControlChars(rule.id) ||
        rule.id.find(' ') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "rule id must be a bare word");
    }
    if (!ids.insert(rule.id).second) {
      throw Error(ErrorCode::kDuplicateId, "rule id '" + rule.id + "'");
    }
  }
}

RuleSet DefaultRules() {
  return RuleSet({
      {RuleKind::kPrefix, "ur-", "PN", "prefix-ur"},
      {RuleKind::kPrefix, "lu2-", "PN", "prefix-lu2"},
      {RuleKind::kPrefix, "dumu", "PN", "prefix-dumu"},
      {RuleKind::kPrevEquals, "mu", "YEAR", "after-mu"},
      {RuleKind::kPrevEquals, "iti", "MONTH", "after-iti"},
      {RuleKind::kContains, "ki", "GN", "contains-ki"},
      {RuleKind::kSuffix, "-hul", "V", "suffix-hul"},
      {RuleKind::kContains, "{d}", "PN", "contains-d-pn"},
      {RuleKind::kContains, "{d}", "DN", "contains-d-dn"},
      {RuleKind::kNextEquals, "gin", "N", "before-gin"},
  });
}

bool RuleFires(const Rule& rule, const Phrase& phrase, std::size_t position) {
  const std::string& surface = phrase.tokens[position].surface;
  switch (rule.kind) {
    case RuleKind::kPrefix: return StartsWith(surface, rule.pattern);
    case RuleKind::kSuffix: return EndsWith(surface, rule.pattern);
    case RuleKind::kContains:
      return surface.find(rule.pattern) != std::string::npos;
    case RuleKind::kEquals: return surface == rule.pattern;
    case RuleKind::kPrevEquals:
      return position > 0 &&
             phrase.tokens[position - 1].surface == rule.pattern;
    case RuleKind::kNextEquals:
      return position + 1 < phrase.tokens.size() &&
             phrase.tokens[position + 1].surface == rule.pattern;
  }
  return false;
}

std::vector<std::string> ApplyRules(const RuleSet& rules, const Phrase& phrase,
                                    std::size_t position) {
  if (position >= phrase.tokens.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "position " + std::to_string(position) + " in a phrase of " +
                    std::to_string(phrase.tokens.size()) + " tokens");
  }
  std::vector<std::string> fired;
  for (const Rule& rule : rules.rules()) {
    if (RuleFires(rule, phrase, position)) fired.push_back(rule.id);
  }
  std::sort(fired.begin(), fired.end());
  return fired;
}

RuleSet ReadRules(std::istream& in, const std::string& source) {
  std::vector<Rule> rules;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> fields = internal::Split(line, '\t');
    if (fields.size() != 4) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected KIND<TAB>PATTERN<TAB>HINT<TAB>ID", line_no, source);
    }
    Rule rule;
    bool known = false;
    for (RuleKind kind : kAllKinds) {
      if (RuleKindName(kind) == fields[0]) {
        rule.kind = kind;
        known = true;
      }
    }
    if (!known) {
      throw Error(ErrorCode::kUnknownRuleKind, "'" + fields[0] + "'", line_no,
                  source);
    }
    rule.pattern = fields[1];
    rule.hint = fields[2];
    rule.id = fields[3];
    if (!ids.insert(rule.id).second) {
      throw Error(ErrorCode::kDuplicateId, "rule id '" + rule.id + "'",
                  line_no, source);
    }
    try {
      RuleSet({rule});
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedLine, e.message(), line_no, source);
    }
    rules.push_back(std::move(rule));
  }
  return RuleSet(std::move(rules));
}

void WriteRules(const RuleSet& rules, std::ostream& out) {
  for (const Rule& rule : rules.rules()) {
    out << RuleKindName(rule.kind) << '\t' << rule.pattern << '\t'
        << rule.hint << '\t' << rule.id << '\n';
  }
}

RuleSet LoadRules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for reading", 0,
                path.string());
  }
  return ReadRules(in, path.string());
}

void SaveRules(const RuleSet& rules, const std::filesystem::path& path) {
  std::ostringstream out;
  WriteRules(rules, out);
  internal::WriteFile(path, out.str());
}

std::string RulesLintReport(const RuleSet& rules,
                            const std::vector<Phrase>& phrases) {
  std::ostringstream out;
  out << "rules " << rules.size() << '\n';
  for (const Rule& rule : rules.rules()) {
    out << "rule\t" << rule.id << '\t' << RuleKindName(rule.kind) << '\t'
        << rule.pattern << '\t' << rule.hint << '\n';
  }
  if (phrases.empty()) return out.str();

  std::size_t width = 5;
  for (const Phrase& p : phrases) {
    for (const Token& t : p.tokens) width = std::max(width, t.surface.size());
  }
  out << "\nphrase\tpos\t" << std::string("token") << std::string(width - 5, ' ');
  for (const Rule& rule : rules.rules()) out << '\t' << rule.id;
  out << '\n';
  std::vector<std::size_t> fire_counts(rules.size(), 0);
  for (const Phrase& p : phrases) {
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      const std::string& surface = p.tokens[i].surface;
      out << p.id << '\t' << i << '\t' << surface
          << std::string(width - surface.size(), ' ');
      for (std::size_t r = 0; r < rules.size(); ++r) {
        bool fires = RuleFires(rules.rules()[r], p, i);
        fire_counts[r] += fires ? 1 : 0;
        out << '\t' << (fires ? "x" : ".");
      }
      out << '\n';
    }
  }
  out << '\n';
  for (std::size_t r = 0; r < rules.size(); ++r) {
    out << "fired\t" << rules.rules()[r].id << '\t' << fire_counts[r] << '\n';
  }
  return out.str();
}

}  // namespace cuneilab
