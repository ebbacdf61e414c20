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

#ifndef CUNEILAB_RULES_HPP_
#define CUNEILAB_RULES_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cuneilab/corpus.hpp"

namespace cuneilab {

enum class RuleKind { kPrefix, kSuffix, kContains, kEquals, kPrevEquals, kNextEquals };

std::string_view RuleKindName(RuleKind kind);

// A binary detector over a token and its neighbours. `hint` names the
// label the rule is evidence for; the tagger learns how much to trust it.
struct Rule {
  RuleKind kind = RuleKind::kEquals;
  std::string pattern;
  std::string hint;
  std::string id;

  bool operator==(const Rule&) const = default;
};

// Labels a rule may hint at: the POS and NER inventories plus YEAR/MONTH.
bool IsValidHint(std::string_view hint);

class RuleSet {
 public:
  RuleSet() = default;
  // Validates patterns, hints and id uniqueness (DuplicateId).
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  bool operator==(const RuleSet&) const = default;

 private:
  std::vector<Rule> rules_;
};

// The expert rules used with the CRF:
//   words starting with "ur-", "lu2-" or "dumu" -> PN
//   the word after "mu" -> YEAR, the word after "iti" -> MONTH
//   words containing "ki" -> GN, words ending in "-hul" -> V
//   words containing "{d}" -> PN and -> DN
//   a word followed by "gin" -> N
RuleSet DefaultRules();

bool RuleFires(const Rule& rule, const Phrase& phrase, std::size_t position);

// Ids of the rules firing at `position`, sorted. Throws IndexOutOfRange.
std::vector<std::string> ApplyRules(const RuleSet& rules, const Phrase& phrase,
                                    std::size_t position);

// TSV "KIND<TAB>PATTERN<TAB>HINT<TAB>ID"; '#' comments and blank lines are
// skipped on read.
RuleSet ReadRules(std::istream& in, const std::string& source = {});
void WriteRules(const RuleSet& rules, std::ostream& out);
RuleSet LoadRules(const std::filesystem::path& path);
void SaveRules(const RuleSet& rules, const std::filesystem::path& path);

// Token-by-rule firing matrix over `phrases`, one row per token.
std::string RulesLintReport(const RuleSet& rules,
                            const std::vector<Phrase>& phrases);

}  // namespace cuneilab

#endif  // CUNEILAB_RULES_HPP_
