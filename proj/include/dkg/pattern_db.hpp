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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dkg/corpus.hpp"
#include "dkg/dependency.hpp"
#include "dkg/error.hpp"
#include "dkg/pattern.hpp"

namespace dkg {

// Dependency analysis of one candidate, shared by pattern counting and
// scoring.
struct CandidateAnalysis {
  NormalizedCore core;
  std::map<int, DependencyPath> sub_paths;
  std::vector<TokenCategory> categories;  // indexed by token - 1
};

inline CandidateAnalysis Analyze(const CandidateDescription &c,
                                 const std::set<std::string> &modifying) {
  const DependencyTree tree(c.tokens);
  CandidateAnalysis a;
  a.core = NormalizeSubjectFirst(c.core_path);
  a.sub_paths = SubPaths(tree, a.core.path);
  a.categories = ClassifyTokens(tree, a.core.path, a.sub_paths, modifying);
  return a;
}

// Distinct non-empty sub patterns of the modifying tokens of one sentence.
// Counting each at most once per sentence makes every counted prefix at
// least as frequent as its extensions.
inline std::set<RelationPattern> SentenceSubPatterns(const CandidateAnalysis &a) {
  std::set<RelationPattern> out;
  for (const TokenCategory &cat : a.categories) {
    if (cat.kind == TokenCategory::Kind::kModifying && !cat.pattern.empty()) {
      out.insert(cat.pattern);
    }
  }
  return out;
}

enum class PatternKind { kCore, kSub };

inline const char *PatternKindName(PatternKind k) {
  return k == PatternKind::kCore ? "core" : "sub";
}

// Frequency table of relation patterns.
class PatternDatabase {
 public:
  explicit PatternDatabase(PatternKind kind = PatternKind::kCore) : kind_(kind) {}

  PatternKind kind() const { return kind_; }
  size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  void Add(const std::string &pattern, uint64_t n = 1) {
    uint64_t &c = counts_[pattern];
    c += n;
    f_max_ = std::max(f_max_, c);
  }
  void Add(const RelationPattern &pattern, uint64_t n = 1) { Add(pattern.ToString(), n); }

  uint64_t Frequency(const std::string &pattern) const {
    auto it = counts_.find(pattern);
    return it == counts_.end() ? 0 : it->second;
  }
  uint64_t Frequency(const RelationPattern &pattern) const {
    return Frequency(pattern.ToString());
  }
  uint64_t MaxFrequency() const { return f_max_; }

  // Descending count, then ascending pattern.
  std::vector<std::pair<std::string, uint64_t>> SortedEntries() const {
    std::vector<std::pair<std::string, uint64_t>> out(counts_.begin(), counts_.end());
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    return out;
  }

  static PatternDatabase Merge(const std::vector<PatternDatabase> &shards) {
    if (shards.empty()) return PatternDatabase();
    PatternDatabase out(shards.front().kind());
    for (const PatternDatabase &s : shards) {
      if (s.kind() != out.kind()) {
        throw Error(ErrorKind::kInvalidArgument, "cannot merge core and sub pattern databases");
      }
      for (const auto &[p, c] : s.counts_) out.Add(p, c);
    }
    return out;
  }

  void Save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::kMissingInput, "cannot write " + path);
    out << "#kind=" << PatternKindName(kind_) << "\n";
    for (const auto &[p, c] : SortedEntries()) out << p << "\t" << c << "\n";
  }

  static PatternDatabase Load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::kMissingInput, "cannot open pattern database: " + path);
    std::string line;
    if (!std::getline(in, line)) throw MalformedLine(path, 1, "missing #kind header");
    PatternDatabase db;
    if (line == "#kind=core") {
      db.kind_ = PatternKind::kCore;
    } else if (line == "#kind=sub") {
      db.kind_ = PatternKind::kSub;
    } else {
      throw MalformedLine(path, 1, "expected #kind=core or #kind=sub");
    }
    size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      size_t tab = line.find('\t');
      if (tab == std::string::npos || tab + 1 == line.size()) {
        throw MalformedLine(path, line_no, "expected pattern<TAB>count");
      }
      std::string pattern = line.substr(0, tab);
      std::string count = line.substr(tab + 1);
      if (count.find_first_not_of("0123456789") != std::string::npos) {
        throw MalformedLine(path, line_no, "count is not a non-negative integer");
      }
      if (db.counts_.count(pattern)) {
        throw MalformedLine(path, line_no, "duplicate pattern '" + pattern + "'");
      }
      db.Add(pattern, std::stoull(count));
    }
    return db;
  }

  bool operator==(const PatternDatabase &o) const {
    return kind_ == o.kind_ && counts_ == o.counts_;
  }

  const std::unordered_map<std::string, uint64_t> &counts() const { return counts_; }

 private:
  PatternKind kind_;
  std::unordered_map<std::string, uint64_t> counts_;
  uint64_t f_max_ = 0;
};

enum class AccumulateOutcome { kAdded, kBelowThreshold, kRelevanceMiss };

inline constexpr double kDefaultBuildThreshold = 0.5;

inline AccumulateOutcome Accumulate(PatternDatabase *core_db, PatternDatabase *sub_db,
                                    const CandidateDescription &c, double theta_build,
                                    const std::set<std::string> &modifying) {
  if (!c.relevance) return AccumulateOutcome::kRelevanceMiss;
  if (*c.relevance < theta_build) return AccumulateOutcome::kBelowThreshold;
  const CandidateAnalysis a = Analyze(c, modifying);
  core_db->Add(a.core.pattern);
  for (const RelationPattern &p : SentenceSubPatterns(a)) sub_db->Add(p);
  return AccumulateOutcome::kAdded;
}

}  // namespace dkg
