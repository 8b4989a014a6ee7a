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
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dkg/error.hpp"
#include "dkg/graph.hpp"
#include "dkg/parallel.hpp"

namespace dkg {

inline constexpr int kDefaultMaxHops = 3;

// Alternating entity / sentence sequence connecting two entities.
struct ReasoningPath {
  std::vector<std::string> entities;   // x, e1, ..., y
  std::vector<std::string> sentences;  // one per hop
  std::vector<double> rds;             // RDScore of each hop
  double score = 0.0;

  size_t hops() const { return sentences.size(); }
  bool operator==(const ReasoningPath &) const = default;
};

// Harmonic mean of the hop RDScores. Summed in extended precision over the
// sorted values so the result ignores hop order and equal values round-trip.
inline double PathScore(std::vector<double> rds) {
  if (rds.empty()) return 0.0;
  std::sort(rds.begin(), rds.end());
  if (rds.front() <= 0.0) return 0.0;
  long double inv = 0.0L;
  for (double rd : rds) inv += 1.0L / rd;
  return static_cast<double>(static_cast<long double>(rds.size()) / inv);
}

enum class PathStatus { kOk, kUnknownEntity };

struct PathQuery {
  PathStatus status = PathStatus::kOk;
  std::vector<ReasoningPath> paths;
};

// Every simple path from x to y with at most `max_hops` edges, found by
// depth-limited DFS in neighbour order. With `exclude_direct` the x-y edge
// itself is never used.
inline PathQuery EnumeratePaths(const DescriptiveGraph &g, const std::string &x,
                                const std::string &y, int max_hops, bool exclude_direct) {
  PathQuery result;
  const int src = g.NodeId(x), dst = g.NodeId(y);
  if (src < 0 || dst < 0) {
    result.status = PathStatus::kUnknownEntity;
    return result;
  }
  if (src == dst || max_hops < 1) return result;
  std::vector<bool> on_path(g.node_count(), false);
  std::vector<int> nodes = {src};
  std::vector<int> edges;
  on_path[src] = true;

  auto emit = [&] {
    ReasoningPath p;
    for (int n : nodes) p.entities.push_back(g.NodeName(n));
    for (int e : edges) {
      p.sentences.push_back(g.EdgeAt(e).edge.sentence);
      p.rds.push_back(g.EdgeAt(e).edge.rd);
    }
    p.score = PathScore(p.rds);
    result.paths.push_back(std::move(p));
  };

  auto dfs = [&](auto &&self, int u) -> void {
    for (const auto &adj : g.AdjacentTo(u)) {
      if (on_path[adj.node]) continue;
      if (adj.node == dst) {
        if (exclude_direct && u == src) continue;
        nodes.push_back(dst);
        edges.push_back(adj.edge);
        emit();
        nodes.pop_back();
        edges.pop_back();
        continue;
      }
      if (static_cast<int>(edges.size()) + 2 > max_hops) continue;
      on_path[adj.node] = true;
      nodes.push_back(adj.node);
      edges.push_back(adj.edge);
      self(self, adj.node);
      on_path[adj.node] = false;
      nodes.pop_back();
      edges.pop_back();
    }
  };
  dfs(dfs, src);
  return result;
}

// Retrieval order: fewer hops, then higher PathScore, then intermediate
// entity sequence.
inline bool PathRanksBefore(const ReasoningPath &p, const ReasoningPath &q) {
  if (p.hops() != q.hops()) return p.hops() < q.hops();
  if (p.score != q.score) return p.score > q.score;
  return p.entities < q.entities;
}

inline void RankPaths(std::vector<ReasoningPath> *paths) {
  std::sort(paths->begin(), paths->end(), PathRanksBefore);
}

inline PathQuery RankAndRetrieve(const DescriptiveGraph &g, const std::string &x,
                                 const std::string &y, size_t m, int max_hops,
                                 bool exclude_direct) {
  PathQuery q = EnumeratePaths(g, x, y, max_hops, exclude_direct);
  RankPaths(&q.paths);
  if (q.paths.size() > m) q.paths.resize(m);
  return q;
}

// Generator input, one string per path; no paths gives the pairs-only string.
inline std::vector<std::string> EncodeInput(const std::string &x, const std::string &y,
                                            const std::vector<ReasoningPath> &paths) {
  const std::string pair = "entity1: " + x + " entity2: " + y;
  if (paths.empty()) return {pair};
  std::vector<std::string> out;
  out.reserve(paths.size());
  for (const ReasoningPath &p : paths) {
    std::string s = pair + " path: " + Join(p.entities, "; ");
    for (size_t i = 0; i < p.sentences.size(); ++i) {
      s += " sentence" + std::to_string(i + 1) + ": " + p.sentences[i];
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct GenerationRecord {
  std::string x;
  std::string y;
  std::string target;
  std::vector<std::string> inputs;
  size_t available_paths = 0;
};

inline std::string RecordToJsonLine(const GenerationRecord &r) {
  nlohmann::ordered_json j;
  j["x"] = r.x;
  j["y"] = r.y;
  j["target"] = r.target;
  j["inputs"] = r.inputs;
  return j.dump();
}

struct SplitSizes {
  size_t train = 0;
  size_t valid = 0;
  size_t test = 0;
};

// floor(96%) train, floor(2%) valid, remainder test.
inline SplitSizes ComputeSplit(size_t n) {
  SplitSizes s;
  s.train = n * 96 / 100;
  s.valid = n * 2 / 100;
  s.test = n - s.train - s.valid;
  return s;
}

// Fisher-Yates over a raw mt19937_64 stream with rejection sampling, so the
// permutation is identical across standard library implementations.
template <typename T>
void DeterministicShuffle(std::vector<T> *items, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (size_t i = items->size(); i > 1; --i) {
    const uint64_t bound = i;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap((*items)[i - 1], (*items)[r % bound]);
  }
}

struct ExportOptions {
  size_t m = 5;
  size_t min_paths = 5;
  int max_hops = kDefaultMaxHops;
  uint64_t seed = 0;
  unsigned workers = 1;
};

struct DatasetSplits {
  std::vector<GenerationRecord> train;
  std::vector<GenerationRecord> valid;
  std::vector<GenerationRecord> test;
  size_t edges_considered = 0;
  size_t edges_below_min_paths = 0;
};

// One record per edge with at least `min_paths` reasoning paths once the
// edge itself is hidden.
inline DatasetSplits BuildDataset(const DescriptiveGraph &g, const ExportOptions &opt) {
  const auto &edges = g.edges();
  std::vector<std::optional<GenerationRecord>> slots(edges.size());
  ParallelFor(edges.size(), opt.workers, [&](size_t i) {
    const EdgeRecord &e = edges[i];
    PathQuery q = EnumeratePaths(g, e.a, e.b, opt.max_hops, /*exclude_direct=*/true);
    if (q.paths.size() < opt.min_paths) return;
    RankPaths(&q.paths);
    GenerationRecord r;
    r.available_paths = q.paths.size();
    if (q.paths.size() > opt.m) q.paths.resize(opt.m);
    r.x = e.a;
    r.y = e.b;
    r.target = e.edge.sentence;
    r.inputs = EncodeInput(e.a, e.b, q.paths);
    slots[i] = std::move(r);
  });
  std::vector<GenerationRecord> records;
  DatasetSplits out;
  out.edges_considered = edges.size();
  for (auto &slot : slots) {
    if (slot) {
      records.push_back(std::move(*slot));
    } else {
      ++out.edges_below_min_paths;
    }
  }
  DeterministicShuffle(&records, opt.seed);
  const SplitSizes sizes = ComputeSplit(records.size());
  auto take = [&](size_t begin, size_t count) {
    return std::vector<GenerationRecord>(std::make_move_iterator(records.begin() + begin),
                                         std::make_move_iterator(records.begin() + begin + count));
  };
  out.train = take(0, sizes.train);
  out.valid = take(sizes.train, sizes.valid);
  out.test = take(sizes.train + sizes.valid, sizes.test);
  return out;
}

inline void WriteRecords(const std::vector<GenerationRecord> &records,
                         const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kMissingInput, "cannot write " + path.string());
  for (const GenerationRecord &r : records) out << RecordToJsonLine(r) << "\n";
}

inline void WriteDataset(const DatasetSplits &splits, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  WriteRecords(splits.train, dir / "train.jsonl");
  WriteRecords(splits.valid, dir / "valid.jsonl");
  WriteRecords(splits.test, dir / "test.jsonl");
}

}  // namespace dkg
