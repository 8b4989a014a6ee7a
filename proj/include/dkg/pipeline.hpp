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
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dkg/config.hpp"
#include "dkg/corpus.hpp"
#include "dkg/embeddings.hpp"
#include "dkg/error.hpp"
#include "dkg/graph.hpp"
#include "dkg/parallel.hpp"
#include "dkg/paths.hpp"
#include "dkg/pattern_db.hpp"
#include "dkg/scoring.hpp"

namespace dkg {

// Stage artifacts, relative to the output directory.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path candidates() const { return root / "candidates.jsonl"; }
  std::filesystem::path ingest_stats() const { return root / "ingest_stats.tsv"; }
  std::filesystem::path core_db() const { return root / "patterns" / "core.tsv"; }
  std::filesystem::path sub_db() const { return root / "patterns" / "sub.tsv"; }
  std::filesystem::path pattern_stats() const { return root / "patterns" / "stats.tsv"; }
  std::filesystem::path scored() const { return root / "scored.jsonl"; }
  std::filesystem::path graph() const { return root / "graph"; }
  std::filesystem::path dataset() const { return root / "dataset"; }
};

// Non-empty lines with their 1-based line numbers.
inline std::vector<std::pair<size_t, std::string>> ReadLines(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingInput, "cannot open " + path.string());
  std::vector<std::pair<size_t, std::string>> lines;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    lines.emplace_back(n, std::move(line));
  }
  return lines;
}

inline void WriteCounters(const Counters &c, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kMissingInput, "cannot write " + path.string());
  for (const auto &[k, v] : c.counts) out << k << "\t" << v << "\n";
}

inline std::ofstream OpenOutput(const std::filesystem::path &path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kMissingInput, "cannot write " + path.string());
  return out;
}

inline std::vector<CandidateDescription> ReadCandidates(const std::filesystem::path &path) {
  std::vector<CandidateDescription> out;
  for (const auto &[line_no, line] : ReadLines(path)) {
    try {
      out.push_back(CandidateFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw MalformedLine(path.string(), line_no, e.what());
    }
  }
  return out;
}

inline std::vector<ScoredCandidate> ReadScored(const std::filesystem::path &path) {
  std::vector<ScoredCandidate> out;
  for (const auto &[line_no, line] : ReadLines(path)) {
    try {
      out.push_back(ScoredFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw MalformedLine(path.string(), line_no, e.what());
    }
  }
  return out;
}

// corpus + embeddings -> candidates.jsonl
inline Counters RunIngest(const PipelineConfig &cfg) {
  if (cfg.corpus.empty()) throw Error(ErrorKind::kConfig, "ingest requires --corpus");
  if (cfg.embeddings.empty()) throw Error(ErrorKind::kConfig, "ingest requires --embeddings");
  const EmbeddingStore embeddings = EmbeddingStore::Load(cfg.embeddings);
  const TitleIndex titles(embeddings.Titles());

  std::vector<Document> docs;
  for (const auto &[line_no, line] : ReadLines(cfg.corpus)) {
    docs.push_back(ParseDocument(line, cfg.corpus, line_no));
  }
  std::stable_sort(docs.begin(), docs.end(),
                   [](const Document &a, const Document &b) { return a.doc_id < b.doc_id; });

  std::vector<std::vector<CandidateDescription>> per_doc(docs.size());
  std::vector<Counters> per_doc_stats(docs.size());
  ParallelFor(docs.size(), cfg.workers, [&](size_t i) {
    per_doc[i] = IngestDocument(docs[i], titles, embeddings, &per_doc_stats[i]);
  });

  Counters stats;
  stats.Add("documents", docs.size());
  stats.Add("embedding_duplicates", embeddings.duplicates());
  auto out = OpenOutput(Layout{cfg.out}.candidates());
  for (size_t i = 0; i < docs.size(); ++i) {
    stats.Merge(per_doc_stats[i]);
    for (const CandidateDescription &c : per_doc[i]) out << CandidateToJson(c).dump() << "\n";
  }
  WriteCounters(stats, Layout{cfg.out}.ingest_stats());
  return stats;
}

struct PatternDatabases {
  PatternDatabase core{PatternKind::kCore};
  PatternDatabase sub{PatternKind::kSub};
};

// Shard-per-worker accumulation followed by a merge.
inline PatternDatabases BuildPatternDatabases(const std::vector<CandidateDescription> &candidates,
                                              const PipelineConfig &cfg, Counters *stats) {
  const size_t shards = std::max<size_t>(1, std::min<size_t>(cfg.workers, candidates.size()));
  std::vector<PatternDatabase> core(shards, PatternDatabase(PatternKind::kCore));
  std::vector<PatternDatabase> sub(shards, PatternDatabase(PatternKind::kSub));
  std::vector<Counters> counters(shards);
  ParallelFor(shards, cfg.workers, [&](size_t s) {
    const size_t begin = candidates.size() * s / shards;
    const size_t end = candidates.size() * (s + 1) / shards;
    for (size_t i = begin; i < end; ++i) {
      switch (Accumulate(&core[s], &sub[s], candidates[i], cfg.theta_build, cfg.modifying_deps)) {
        case AccumulateOutcome::kAdded: counters[s].Add("candidates_counted"); break;
        case AccumulateOutcome::kBelowThreshold: counters[s].Add("candidates_below_threshold"); break;
        case AccumulateOutcome::kRelevanceMiss: counters[s].Add("candidates_relevance_miss"); break;
      }
    }
  });
  for (const Counters &c : counters) stats->Merge(c);
  PatternDatabases dbs;
  dbs.core = PatternDatabase::Merge(core);
  dbs.sub = PatternDatabase::Merge(sub);
  return dbs;
}

// candidates.jsonl -> patterns/{core,sub}.tsv
inline Counters RunBuildPatterns(const PipelineConfig &cfg) {
  const Layout layout{cfg.out};
  const auto candidates = ReadCandidates(layout.candidates());
  Counters stats;
  PatternDatabases dbs = BuildPatternDatabases(candidates, cfg, &stats);
  std::filesystem::create_directories(layout.core_db().parent_path());
  dbs.core.Save(layout.core_db().string());
  dbs.sub.Save(layout.sub_db().string());
  stats.Add("core_patterns", dbs.core.size());
  stats.Add("sub_patterns", dbs.sub.size());
  WriteCounters(stats, layout.pattern_stats());
  return stats;
}

// candidates + pattern databases -> scored.jsonl
inline size_t RunScore(const PipelineConfig &cfg) {
  const Layout layout{cfg.out};
  const auto candidates = ReadCandidates(layout.candidates());
  const PatternDatabase core = PatternDatabase::Load(layout.core_db().string());
  const PatternDatabase sub = PatternDatabase::Load(layout.sub_db().string());
  if (core.kind() != PatternKind::kCore || sub.kind() != PatternKind::kSub) {
    throw Error(ErrorKind::kMalformedInput, "pattern database kinds do not match their files");
  }
  std::vector<std::string> lines(candidates.size());
  ParallelFor(candidates.size(), cfg.workers, [&](size_t i) {
    lines[i] = ScoredToJsonLine(ScoreCandidate(candidates[i], core, sub, cfg.modifying_deps));
  });
  auto out = OpenOutput(layout.scored());
  for (const std::string &l : lines) out << l << "\n";
  return lines.size();
}

// scored.jsonl -> graph/{nodes,edges,audit}.tsv
inline GraphStats RunBuildGraph(const PipelineConfig &cfg) {
  const Layout layout{cfg.out};
  auto groups = GroupByPair(ReadScored(layout.scored()));
  const DescriptiveGraph g = BuildGraph(BestPerPair(groups), cfg.theta_rel, cfg.theta_rd);
  g.Save(layout.graph());
  WriteAudit(groups, layout.graph() / "audit.tsv");
  return g.Stats();
}

// graph -> dataset/{train,valid,test}.jsonl
inline DatasetSplits RunExportDataset(const PipelineConfig &cfg) {
  const Layout layout{cfg.out};
  const DescriptiveGraph g = DescriptiveGraph::Load(layout.graph());
  ExportOptions opt;
  opt.m = static_cast<size_t>(cfg.m);
  opt.min_paths = static_cast<size_t>(cfg.min_paths);
  opt.max_hops = cfg.max_hops;
  opt.seed = cfg.seed;
  opt.workers = cfg.workers;
  DatasetSplits splits = BuildDataset(g, opt);
  WriteDataset(splits, layout.dataset());
  return splits;
}

inline void RunPipeline(const PipelineConfig &cfg) {
  RunIngest(cfg);
  RunBuildPatterns(cfg);
  RunScore(cfg);
  RunBuildGraph(cfg);
  RunExportDataset(cfg);
}

}  // namespace dkg
