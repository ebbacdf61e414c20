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

#include "cuneilab/synthetic.hpp"

#include <string>
#include <vector>

#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"

namespace cuneilab {
namespace {

struct Item {
  std::string surface;
  const char* pos;
  const char* ner;
};

const std::vector<std::string> kSyllables = {
    "a",   "ab",  "ba",  "bi2", "da",  "du",  "e",   "en",  "ga",  "gi",
    "gu",  "ha",  "hu",  "i",   "il",  "ku",  "la",  "lu",  "ma",  "me",
    "mi",  "mu",  "na",  "ni",  "nu",  "ra",  "ri",  "sa",  "si",  "szu",
    "ta",  "ti",  "tu",  "u2",  "um",  "za",  "zi",  "ab",  "nin", "ku3",
    "sza", "ir",  "ur5", "kal", "tum", "dan", "gir", "pa",  "li",  "an"};

const std::vector<std::string> kNouns = {
    "udu",  "masz2", "sze",  "gu4",   "ku3-babbar", "ninda", "kasz",
    "i3",   "gur",   "sila3", "kiszib3", "dub",     "e2",    "lugal",
    "dam",  "siki",  "tug2", "ab2",   "sila4",      "amar",  "zi3",
    "esza", "gi",    "giri3", "szu-nigin2", "sa2-du11", "mu-kux(DU)",
    "zi-ga", "ba-zi-ga", "u8", "ud5", "ma2"};

const std::vector<std::string> kVerbs = {
    "ba-zi", "i3-dab5", "ba-ti", "ba-ug7", "mu-DU", "ba-an-dab5",
    "ib2-ra", "i3-gal2", "in-na-sum", "ba-na-zi"};

const std::vector<std::string> kAdjectives = {"niga", "gal", "tur", "sig5",
                                              "babbar", "ge6", "du10"};

const std::vector<std::string> kMonths = {
    "sze-sag11-ku5", "masz-da3-gu7", "ses-da-gu7",  "u5-bi2-gu7",
    "ki-siki-{d}nin-a-zu", "ezem-{d}nin-a-zu", "a2-ki-ti", "ezem-{d}szul-gi",
    "sze-kin-ku5",  "ezem-mah",   "ezem-an-na",  "ezem-me-ki-gal2"};

const std::vector<std::string> kKings = {"{d}szul-gi", "amar-{d}suen",
                                         "{d}szu-{d}suen", "i-bi2-{d}suen",
                                         "ur-{d}namma"};

const std::vector<std::string> kCities = {"nibru{ki}", "urim5{ki}",
                                          "unu{ki}",   "umma{ki}",
                                          "ur-bi2-lum{ki}", "si-mu-ru-um{ki}",
                                          "gir2-su{ki}", "puzur4-isz-{d}da-gan{ki}"};

const std::vector<std::string> kNumberUnits = {"disz", "u", "asz", "gesz2",
                                               "ban2", "barig"};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::string Stem(std::size_t min_syl, std::size_t max_syl) {
    std::size_t n = min_syl + rng_.Below(max_syl - min_syl + 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += '-';
      s += rng_.Pick(kSyllables);
    }
    return s;
  }

  // Case/postposition suffixes attached to names in running text.
  std::string Case() {
    static const std::vector<std::string> kCases = {"", "", "", "-ta", "-sze3",
                                                    "-ra", "-ka", "-e"};
    return rng_.Pick(kCases);
  }

  Item Person() {
    switch (rng_.Below(7)) {
      case 0: return {"ur-" + Stem(1, 2), "NE", "PN"};
      case 1: return {"lu2-" + Stem(1, 2), "NE", "PN"};
      case 2: return {"ur-{d}" + Stem(1, 2), "NE", "PN"};
      case 3: return {"lu2-{d}" + Stem(1, 2), "NE", "PN"};
      case 4: return {"dumu-" + Stem(1, 2), "NE", "PN"};
      case 5: return {Stem(2, 3) + "-{d}" + Stem(1, 1), "NE", "PN"};
      default: return {Stem(2, 4), "NE", "PN"};  // no rule covers these
    }
  }

  Item God() { return {"{d}" + Stem(1, 3), "NE", "DN"}; }

  Item Place() {
    switch (rng_.Below(4)) {
      case 0: return {rng_.Pick(kCities), "NE", "GN"};
      case 1: return {"ur-" + Stem(1, 2) + "{ki}", "NE", "GN"};
      default: return {Stem(1, 3) + "{ki}", "NE", "GN"};
    }
  }

  Item Number() {
    return {std::to_string(1 + rng_.Below(9)) + "(" + rng_.Pick(kNumberUnits) +
                ")",
            "NU", "O"};
  }

  Item Noun() {
    if (rng_.Chance(0.1)) return {Stem(1, 2), "N", "O"};
    return {rng_.Pick(kNouns), "N", "O"};
  }

  Item Verb() {
    if (rng_.Chance(0.2)) {
      return {std::string(rng_.Chance(0.5) ? "ba-" : "mu-") + "hul", "V", "O"};
    }
    return {rng_.Pick(kVerbs), "V", "O"};
  }

  // One clause of an administrative text.
  void Clause(std::vector<Item>& out) {
    switch (rng_.Below(14)) {
      case 0:  // count noun [adjective]
      case 1:
        out.push_back(Number());
        out.push_back(Noun());
        if (rng_.Chance(0.4)) out.push_back({rng_.Pick(kAdjectives), "AJ", "O"});
        break;
      case 2: {  // ki PN-ta
        out.push_back({"ki", "N", "O"});
        Item p = Person();
        p.surface += "-ta";
        out.push_back(p);
        break;
      }
      case 3: {  // PN i3-dab5
        Item p = Person();
        p.surface += Case();
        out.push_back(p);
        out.push_back(Verb());
        break;
      }
      case 4:
        out.push_back({"szu", "N", "O"});
        out.push_back({"ba-ti", "V", "O"});
        break;
      case 5:
        out.push_back({"iti", "N", "O"});
        out.push_back({rng_.Pick(kMonths), "NE", "MN"});
        break;
      case 6: {  // year name
        out.push_back({"mu", "N", "O"});
        if (rng_.Chance(0.3)) out.push_back({"us2-sa", "V", "O"});
        out.push_back({rng_.Pick(kKings), "NE", "RN"});
        out.push_back({"lugal", "N", "O"});
        if (rng_.Chance(0.5)) {
          out.push_back(Place());
          out.push_back({rng_.Chance(0.5) ? "ba-hul" : "mu-hul", "V", "O"});
        }
        break;
      }
      case 7:
        out.push_back({rng_.Chance(0.5) ? "kiszib3" : "giri3", "N", "O"});
        out.push_back(Person());
        break;
      case 8: {  // PN dumu PN
        out.push_back(Person());
        out.push_back({"dumu", "N", "O"});
        out.push_back(Person());
        break;
      }
      case 9:
        out.push_back({"sa2-du11", "N", "O"});
        out.push_back(God());
        break;
      case 10: {  // unknown noun before "gin"
        out.push_back({Stem(1, 2), "N", "O"});
        out.push_back({"gin", "V", "O"});
        break;
      }
      case 11:
        out.push_back(Person());
        out.push_back({"u3", "CNJ", "O"});
        out.push_back(Person());
        break;
      case 12:
        out.push_back(Place());
        out.push_back({rng_.Chance(0.5) ? "e2-gal" : "e2", "N", "O"});
        break;
      default:  // damaged signs
        out.push_back({rng_.Chance(0.5) ? "x" : "[...]", "O", "O"});
        if (rng_.Chance(0.5)) out.push_back(Noun());
        break;
    }
  }

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
};

}  // namespace

Corpus GenerateSynthetic(const SyntheticOptions& options) {
  if (options.phrases == 0) throw Error(ErrorCode::kEmptyCorpus, "no phrases requested");
  if (options.lexical_noise < 0 || options.lexical_noise > 1 ||
      options.label_noise < 0 || options.label_noise > 1) {
    throw Error(ErrorCode::kInvalidArgument, "noise rates must lie in [0, 1]");
  }
  const TagSet& tagset = options.ner ? TagSet::Ner() : TagSet::Pos();
  std::vector<TaggedPhrase> out;
  out.reserve(options.phrases);
  for (std::size_t i = 0; i < options.phrases; ++i) {
    Generator gen(DeriveSeed(options.seed, {i}));
    Rng& rng = gen.rng();
    std::vector<Item> items;
    const std::size_t clauses = 1 + rng.Below(3);
    for (std::size_t c = 0; c < clauses && items.size() < 16; ++c) gen.Clause(items);
    if (items.size() > 19) items.resize(19);
    std::vector<std::string> surfaces;
    std::vector<int> tags;
    for (Item& item : items) {
      if (rng.Chance(options.lexical_noise)) item.surface = gen.Stem(1, 3);
      int tag = *tagset.IndexOf(options.ner ? item.ner : item.pos);
      if (rng.Chance(options.label_noise)) {
        int other = static_cast<int>(rng.Below(tagset.size() - 1));
        tag = other >= tag ? other + 1 : other;
      }
      surfaces.push_back(item.surface);
      tags.push_back(tag);
    }
    Phrase phrase = MakePhrase(surfaces, std::to_string(i + 1));
    phrase.genre = Genre::kUrIIIAdmin;
    out.push_back({std::move(phrase), std::move(tags)});
  }
  return Corpus::Tagged(std::move(out), tagset, CorpusConfig::kUrIIISeg);
}

}  // namespace cuneilab
