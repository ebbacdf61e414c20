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

#include "cuneilab/translate.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cuneilab/error.hpp"
#include "text_util.hpp"

extern char** environ;

namespace cuneilab {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kManifestMagic = "#cuneilab-ft-manifest v1";

struct ShardRecord {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::uintmax_t bytes_after = 0;  // merged.tsv size once the shard is in
};

struct Manifest {
  std::string translator;
  std::string input_hash;
  std::size_t input_lines = 0;
  std::size_t shard_size = 0;
  std::size_t shard_count = 0;
  std::vector<ShardRecord> done;  // contiguous from shard 0
};

// FNV-1a over the source text, to tie a manifest to its input.
std::string HashLines(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (char c : corpus.PhraseAt(i).Text() + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FormatManifest(const Manifest& m) {
  std::ostringstream out;
  out << kManifestMagic << '\n';
  out << "translator " << m.translator << '\n';
  out << "input_lines " << m.input_lines << '\n';
  out << "input_hash " << m.input_hash << '\n';
  out << "shard_size " << m.shard_size << '\n';
  out << "shard_count " << m.shard_count << '\n';
  for (std::size_t i = 0; i < m.done.size(); ++i) {
    out << "shard " << i << ' ' << m.done[i].begin << ' ' << m.done[i].end << ' '
        << m.done[i].bytes_after << '\n';
  }
  return out.str();
}

Manifest ParseManifest(const fs::path& path) {
  const std::string source = path.string();
  auto lines = internal::ReadLines(path);
  if (lines.empty() || lines[0] != kManifestMagic) {
    throw Error(ErrorCode::kBadMagic, "not a forward-translation manifest", 1, source);
  }
  Manifest m;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string& line = lines[i];
    if (internal::Trim(line).empty()) continue;
    auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    if (key == "translator") {
      m.translator = value;
    } else if (key == "input_hash") {
      m.input_hash = value;
    } else if (key == "input_lines") {
      m.input_lines = internal::ParseUint(value, line_no, source);
    } else if (key == "shard_size") {
      m.shard_size = internal::ParseUint(value, line_no, source);
    } else if (key == "shard_count") {
      m.shard_count = internal::ParseUint(value, line_no, source);
    } else if (key == "shard") {
      auto f = internal::SplitWhitespace(value);
      if (f.size() != 4 || internal::ParseUint(f[0], line_no, source) != m.done.size()) {
        throw Error(ErrorCode::kMalformedLine,
                    "expected 'shard <next index> <begin> <end> <bytes>'", line_no,
                    source);
      }
      m.done.push_back({internal::ParseUint(f[1], line_no, source),
                        internal::ParseUint(f[2], line_no, source),
                        internal::ParseUint(f[3], line_no, source)});
    } else {
      throw Error(ErrorCode::kMalformedLine, "unknown key '" + key + "'", line_no,
                  source);
    }
  }
  return m;
}

void WriteAtomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  internal::WriteFile(tmp, content);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot replace " + path.string());
}

std::string ShardName(std::size_t shard, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard_%04zu.%s", shard, ext);
  return buf;
}

// Runs the translator with stdin/stdout redirected; returns the wait
// status or throws when the process cannot be started.
int RunTranslator(const Translator& t, const fs::path& in, const fs::path& out,
                  std::size_t shard) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, in.c_str(), O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::vector<char*> argv;
  for (const auto& a : t.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(ErrorCode::kTranslatorFailed,
                "cannot start '" + t.argv[0] + "': " + std::strerror(rc), shard);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) {
      throw Error(ErrorCode::kTranslatorFailed, "lost the translator process", shard);
    }
  }
  return status;
}

}  // namespace

std::string Translator::Identity() const { return internal::Join(argv, " "); }

FtResult ForwardTranslate(const Corpus& monolingual, const Translator& translator,
                          const fs::path& out, const FtOptions& options) {
  if (translator.argv.empty() || translator.argv[0].empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no translator command");
  }
  if (monolingual.empty()) throw Error(ErrorCode::kEmptyCorpus, "nothing to translate");
  const std::vector<Corpus> shards = Shard(monolingual, options.shard_size);

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out.string());
  const fs::path manifest_path = out / "manifest.txt";
  const fs::path merged_path = out / "merged.tsv";

  Manifest manifest;
  manifest.translator = translator.Identity();
  manifest.input_hash = HashLines(monolingual);
  manifest.input_lines = monolingual.size();
  manifest.shard_size = options.shard_size;
  manifest.shard_count = shards.size();

  FtResult result;
  result.shard_count = shards.size();
  std::uintmax_t merged_bytes = 0;
  if (options.resume && fs::exists(manifest_path)) {
    Manifest old = ParseManifest(manifest_path);
    if (old.translator != manifest.translator || old.input_hash != manifest.input_hash ||
        old.input_lines != manifest.input_lines ||
        old.shard_size != manifest.shard_size || old.done.size() > shards.size()) {
      throw Error(ErrorCode::kManifestMismatch,
                  manifest_path.string() +
                      " belongs to another input or translator; remove it or "
                      "disable resume");
    }
    if (!old.done.empty()) {
      merged_bytes = old.done.back().bytes_after;
      if (!fs::exists(merged_path) || fs::file_size(merged_path) < merged_bytes) {
        throw Error(ErrorCode::kManifestMismatch,
                    merged_path.string() + " is shorter than the manifest records");
      }
    }
    manifest.done = old.done;
  }
  // Drop anything written after the last completed shard.
  {
    std::ofstream touch(merged_path, std::ios::binary | std::ios::app);
    if (!touch) throw Error(ErrorCode::kIoFailure, "cannot open " + merged_path.string());
  }
  fs::resize_file(merged_path, merged_bytes, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot truncate " + merged_path.string());
  WriteAtomically(manifest_path, FormatManifest(manifest));

  result.shards_skipped = manifest.done.size();
  std::size_t begin = 0;
  for (std::size_t s = 0; s < manifest.done.size(); ++s) begin += shards[s].size();
  for (std::size_t s = manifest.done.size(); s < shards.size(); ++s) {
    const Corpus& shard = shards[s];
    const fs::path src_path = out / ShardName(s, "src");
    const fs::path tgt_path = out / ShardName(s, "tgt");
    std::string src_text;
    for (std::size_t i = 0; i < shard.size(); ++i) {
      src_text += shard.PhraseAt(i).Text();
      src_text += '\n';
    }
    internal::WriteFile(src_path, src_text);

    const int status = RunTranslator(translator, src_path, tgt_path, s);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
      throw Error(ErrorCode::kTranslatorFailed,
                  "shard " + std::to_string(s) + ": translator exited with status " +
                      std::to_string(code),
                  s);
    }
    auto targets = internal::ReadLines(tgt_path);
    if (targets.size() != shard.size()) {
      throw Error(ErrorCode::kLineCountMismatch,
                  "shard " + std::to_string(s) + ": " + std::to_string(shard.size()) +
                      " lines in, " + std::to_string(targets.size()) + " lines out",
                  s);
    }
    std::string block;
    for (std::size_t i = 0; i < shard.size(); ++i) {
      std::string target(internal::Trim(targets[i]));
      if (target.empty() || target.find('\t') != std::string::npos) {
        throw Error(ErrorCode::kMalformedLine,
                    "translation is empty or contains a tab", i + 1, tgt_path.string());
      }
      block += shard.PhraseAt(i).Text() + "\t" + target + "\n";
    }
    {
      std::ofstream merged(merged_path, std::ios::binary | std::ios::app);
      merged << block;
      merged.flush();
      if (!merged) throw Error(ErrorCode::kIoFailure, "cannot append to " + merged_path.string());
    }
    manifest.done.push_back({begin, begin + shard.size(), fs::file_size(merged_path)});
    begin += shard.size();
    WriteAtomically(manifest_path, FormatManifest(manifest));
    ++result.shards_run;
  }

  std::ifstream merged(merged_path, std::ios::binary);
  result.merged = Corpus::Parallel(ParseParallelTsv(merged, merged_path.string()).pairs());
  return result;
}

}  // namespace cuneilab
