// Copyright 2026 The DKG Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "dkg/dependency.hpp"
#include "dkg/error.hpp"
#include "dkg/graph.hpp"
#include "dkg/parallel.hpp"
#include "dkg/paths.hpp"
#include "dkg/pattern_db.hpp"

namespace dkg {

struct PipelineConfig {
  std::string corpus;
  std::string embeddings;
  std::string out = "dkg_out";
  double theta_build = kDefaultBuildThreshold;
  double theta_rel = kDefaultRelevanceThreshold;
  double theta_rd = kDefaultRdThreshold;
  std::set<std::string> modifying_deps = DefaultModifyingDependencies();
  int max_hops = kDefaultMaxHops;
  int64_t m = 5;
  int64_t min_paths = 5;
  uint64_t seed = 0;
  unsigned workers = DefaultWorkerCount();

  void Validate() const {
    auto unit = [](double v, const char *name) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::kConfig, std::string(name) + " must lie in [0, 1]");
      }
    };
    unit(theta_build, "theta_build");
    unit(theta_rel, "theta_rel");
    unit(theta_rd, "theta_rd");
    if (max_hops < 1) throw Error(ErrorKind::kConfig, "max_hops must be >= 1");
    if (m < 0) throw Error(ErrorKind::kConfig, "m must be >= 0");
    if (min_paths < 0) throw Error(ErrorKind::kConfig, "min_paths must be >= 0");
    if (workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  }
};

namespace config_detail {

inline std::string Unquote(std::string_view v, const std::string &where) {
  if (v.size() >= 2 && v.front() == '"') {
    if (v.back() != '"') throw Error(ErrorKind::kConfig, where + ": unterminated string");
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

inline double ParseDouble(const std::string &v, const std::string &where) {
  char *end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw Error(ErrorKind::kConfig, where + ": expected a number");
  return d;
}

inline int64_t ParseInt(const std::string &v, const std::string &where) {
  char *end = nullptr;
  long long n = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0') throw Error(ErrorKind::kConfig, where + ": expected an integer");
  return n;
}

// Accepts `["a", "b"]` or a bare comma-separated list.
inline std::set<std::string> ParseLabelList(std::string_view v, const std::string &where) {
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw Error(ErrorKind::kConfig, where + ": unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::set<std::string> out;
  for (const std::string &item : Split(v, ',')) {
    std::string_view t = Trim(item);
    if (t.empty()) continue;
    out.insert(Unquote(t, where));
  }
  return out;
}

}  // namespace config_detail

// Applies one `key = value` assignment. Unknown keys are errors.
inline void SetConfigValue(PipelineConfig *cfg, const std::string &key, std::string_view raw,
                           const std::string &where) {
  using namespace config_detail;
  const std::string value = Unquote(Trim(raw), where);
  if (key == "corpus") cfg->corpus = value;
  else if (key == "embeddings") cfg->embeddings = value;
  else if (key == "out") cfg->out = value;
  else if (key == "theta_build") cfg->theta_build = ParseDouble(value, where);
  else if (key == "theta_rel") cfg->theta_rel = ParseDouble(value, where);
  else if (key == "theta_rd") cfg->theta_rd = ParseDouble(value, where);
  else if (key == "modifying_deps") cfg->modifying_deps = ParseLabelList(Trim(raw), where);
  else if (key == "max_hops") cfg->max_hops = static_cast<int>(ParseInt(value, where));
  else if (key == "m") cfg->m = ParseInt(value, where);
  else if (key == "min_paths") cfg->min_paths = ParseInt(value, where);
  else if (key == "seed") cfg->seed = static_cast<uint64_t>(ParseInt(value, where));
  else if (key == "workers") {
    int64_t w = ParseInt(value, where);
    if (w < 0) throw Error(ErrorKind::kConfig, where + ": workers must be >= 0");
    cfg->workers = w == 0 ? DefaultWorkerCount() : static_cast<unsigned>(w);
  } else {
    throw Error(ErrorKind::kConfig, where + ": unknown key '" + key + "'");
  }
}

// TOML-style text: `key = value` lines, `#` comments, `[section]` headers
// ignored.
inline void ParseConfigText(PipelineConfig *cfg, const std::string &text,
                            const std::string &name = "config") {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '[') continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::kConfig, where + ": expected key = value");
    std::string key(Trim(t.substr(0, eq)));
    if (key.empty()) throw Error(ErrorKind::kConfig, where + ": empty key");
    SetConfigValue(cfg, key, t.substr(eq + 1), where);
  }
}

inline void LoadConfigFile(PipelineConfig *cfg, const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingInput, "cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ParseConfigText(cfg, buf.str(), path);
}

}  // namespace dkg
