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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cuneilab/error.hpp"
#include "cuneilab/interpret.hpp"
#include "text_util.hpp"

namespace cuneilab {
namespace {

struct Rgb {
  int r, g, b;
};

// White at 0, pure green at +max, pure red at -max.
Rgb Shade(double score, double max_abs) {
  if (max_abs <= 0.0 || score == 0.0) return {255, 255, 255};
  const double a = std::min(1.0, std::fabs(score) / max_abs);
  const int fade = static_cast<int>(std::lround(255.0 - 255.0 * a));
  return score > 0 ? Rgb{fade, 255, fade} : Rgb{255, fade, fade};
}

double MaxAbs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::fabs(x));
  return m;
}

std::string Css(Rgb c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", c.r, c.g, c.b);
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view CorrectnessName(Correctness c) {
  switch (c) {
    case Correctness::kCorrect: return "correct";
    case Correctness::kWrong: return "wrong";
    case Correctness::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string MethodLine(const AttributionMap& map) {
  std::string s = "method " + std::string(AttributionMethodName(map.method));
  if (map.method == AttributionMethod::kShapleySampled) {
    s += " (" + std::to_string(map.samples) + " samples, seed " +
         std::to_string(map.seed) + ")";
  }
  s += "; score " + internal::FormatFixed(map.baseline_score, 4);
  return s;
}

void Html(const AttributionMap& map, Correctness correctness, std::string& out) {
  static const char* kHeader[] = {"rgb(200,240,200)", "rgb(245,200,200)",
                                  "rgb(224,224,224)"};
  const double max_abs = MaxAbs(map.scores);
  out += "<section style=\"margin:1em 0\">\n";
  out += "<h2 style=\"background:";
  out += kHeader[static_cast<int>(correctness)];
  out += ";padding:4px;font-size:1.1em\">";
  out += Escape(map.phrase.id.empty() ? "" : map.phrase.id + ": ");
  out += Escape(map.target.Describe());
  out += " (" + std::string(CorrectnessName(correctness)) + ")</h2>\n";
  out += "<p style=\"color:#555\">" + Escape(MethodLine(map)) + "</p>\n<p>";
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    if (i) out += ' ';
    out += "<span style=\"background:" + Css(Shade(map.scores[i], max_abs)) +
           ";padding:2px 4px";
    if (i == map.target.position) out += ";border:1px solid #000";
    out += "\" title=\"" + internal::FormatFixed(map.scores[i], 4) + "\">";
    out += Escape(map.phrase.tokens[i].surface) + "</span>";
  }
  out += "</p>\n";
  if (!map.sign_scores.empty()) {
    std::vector<double> all;
    for (const auto& row : map.sign_scores) all.insert(all.end(), row.begin(), row.end());
    const double sign_max = MaxAbs(all);
    out += "<p>";
    for (std::size_t i = 0; i < map.sign_scores.size(); ++i) {
      if (i) out += ' ';
      const Token& token = map.phrase.tokens[i];
      for (std::size_t j = 0; j < map.sign_scores[i].size(); ++j) {
        out += Escape(token.signs[j].separator_before);
        out += "<span style=\"background:" + Css(Shade(map.sign_scores[i][j], sign_max)) +
               "\" title=\"" + internal::FormatFixed(map.sign_scores[i][j], 4) + "\">";
        out += Escape(token.signs[j].text) + "</span>";
      }
    }
    out += "</p>\n";
  }
  out += "</section>\n";
}

void Ansi(const AttributionMap& map, Correctness correctness, std::string& out) {
  static const char* kHeader[] = {"\x1b[1;32m", "\x1b[1;31m", "\x1b[1;37m"};
  const double max_abs = MaxAbs(map.scores);
  out += kHeader[static_cast<int>(correctness)];
  out += (map.phrase.id.empty() ? "" : map.phrase.id + ": ") + map.target.Describe();
  out += " (" + std::string(CorrectnessName(correctness)) + ")\x1b[0m\n";
  out += MethodLine(map) + "\n";
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    if (i) out += ' ';
    const Rgb c = Shade(map.scores[i], max_abs);
    char buf[48];
    std::snprintf(buf, sizeof buf, "\x1b[48;2;%d;%d;%dm\x1b[30m", c.r, c.g, c.b);
    out += buf;
    out += map.phrase.tokens[i].surface;
    out += "\x1b[0m";
  }
  out += '\n';
}

}  // namespace

Correctness ParseCorrectness(std::string_view name) {
  for (Correctness c : {Correctness::kCorrect, Correctness::kWrong, Correctness::kUnknown}) {
    if (CorrectnessName(c) == name) return c;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown correctness '" + std::string(name) +
                  "' (expected correct|wrong|unknown)");
}

std::string Render(const std::vector<RenderItem>& items, RenderFormat format) {
  std::string out;
  if (format == RenderFormat::kHtml) {
    out +=
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>cuneilab attribution</title>\n</head>\n"
        "<body style=\"font-family:monospace;background:#fff;color:#000\">\n";
    for (const auto& item : items) Html(*item.map, item.correctness, out);
    out += "</body>\n</html>\n";
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += '\n';
      Ansi(*items[i].map, items[i].correctness, out);
    }
  }
  return out;
}

std::string Render(const AttributionMap& map, RenderFormat format,
                   Correctness correctness) {
  return Render({RenderItem{&map, correctness}}, format);
}

}  // namespace cuneilab
