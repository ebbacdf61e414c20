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

#include <sstream>

#include "config.hpp"

namespace cuneilab::cli {
namespace {

const std::set<std::string> kAllowed = {"train", "out", "l2", "seed"};
const std::set<std::string> kPaths = {"train", "out"};

TEST(Config, ParsesAndResolvesPaths) {
  std::istringstream in(
      "# experiment\n"
      "train = data/train.conll\n"
      "\n"
      "  l2=4.5  \n"
      "out = /abs/model.crf\n"
      "seed = 7\n");
  auto cfg = ParseConfig(in, "/etc/exp/run.cfg", kAllowed, kPaths);
  EXPECT_EQ(cfg.at("train").value, "/etc/exp/data/train.conll");
  EXPECT_EQ(cfg.at("train").line, 2u);
  EXPECT_EQ(cfg.at("l2").value, "4.5");
  EXPECT_EQ(cfg.at("out").value, "/abs/model.crf");
  EXPECT_EQ(cfg.at("seed").value, "7");
  EXPECT_EQ(cfg.at("seed").line, 6u);
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      ParseConfig(in, "c.cfg", kAllowed, kPaths);
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.line(), line) << text;
      EXPECT_NE(std::string(e.what()).find("c.cfg:"), std::string::npos);
      return;
    }
    ADD_FAILURE() << "accepted: " << text;
  };
  fails_at("bogus = 1\n", 1);
  fails_at("l2 = 1\nl2 = 2\n", 2);
  fails_at("# c\nno equals sign\n", 2);
  fails_at("l2 =\n", 1);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(LoadConfig("/nonexistent/run.cfg", kAllowed, kPaths), ConfigError);
}

}  // namespace
}  // namespace cuneilab::cli
