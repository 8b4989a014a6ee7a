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

// dkg: builds descriptive knowledge graphs from parsed corpora and queries
// them.
//
//   dkg pipeline --corpus docs.jsonl --embeddings emb.tsv --out work/
//   dkg query "Machine learning" "Algorithm" --out work/
//   dkg paths "Machine learning" "Algorithm" --m 5 --out work/

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dkg/dkg.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kMissingInput = 2,
  kMalformedInput = 3,
  kBadConfig = 4,
  kUnknownEntity = 5,
  kEmptyResult = 6,
};

int ExitCodeFor(dkg::ErrorKind kind) {
  switch (kind) {
    case dkg::ErrorKind::kMissingInput: return kMissingInput;
    case dkg::ErrorKind::kMalformedInput: return kMalformedInput;
    case dkg::ErrorKind::kConfig: return kBadConfig;
    case dkg::ErrorKind::kUnknownEntity: return kUnknownEntity;
    case dkg::ErrorKind::kInvalidArgument: return kUsage;
  }
  return kUsage;
}

const char *CategoryName(dkg::ErrorKind kind) {
  switch (kind) {
    case dkg::ErrorKind::kMissingInput: return "missing input";
    case dkg::ErrorKind::kMalformedInput: return "malformed input";
    case dkg::ErrorKind::kConfig: return "config error";
    case dkg::ErrorKind::kUnknownEntity: return "unknown entity";
    case dkg::ErrorKind::kInvalidArgument: return "invalid argument";
  }
  return "error";
}

struct Flags {
  std::string config;
  std::string corpus, embeddings, out;
  double theta_build = 0, theta_rel = 0, theta_rd = 0;
  std::string modifying_deps;
  int max_hops = 0;
  long long m = 0, min_paths = 0, workers = 0;
  unsigned long long seed = 0;
};

void PrintCounters(const dkg::Counters &c) {
  for (const auto &[k, v] : c.counts) std::cout << k << "\t" << v << "\n";
}

void PrintPaths(const std::vector<dkg::ReasoningPath> &paths) {
  for (size_t i = 0; i < paths.size(); ++i) {
    const dkg::ReasoningPath &p = paths[i];
    std::cout << i + 1 << "\t" << p.hops() << "\t" << dkg::FormatFixed(p.score) << "\t"
              << dkg::Join(p.entities, " -> ") << "\n";
    for (size_t h = 0; h < p.sentences.size(); ++h) {
      std::cout << "\t[" << dkg::FormatFixed(p.rds[h]) << "] " << p.sentences[h] << "\n";
    }
  }
}

void RequireEntities(const dkg::DescriptiveGraph &g, const std::string &x, const std::string &y) {
  for (const std::string *e : {&x, &y}) {
    if (!g.HasNode(*e)) throw dkg::Error(dkg::ErrorKind::kUnknownEntity, "not in graph: " + *e);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Descriptive knowledge graph toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  auto *o_config = app.add_option("--config", f.config, "TOML-style key = value config file");
  auto *o_corpus = app.add_option("--corpus", f.corpus, "parsed corpus (JSON Lines)");
  auto *o_emb = app.add_option("--embeddings", f.embeddings, "entity embeddings (title<TAB>vector)");
  auto *o_out = app.add_option("--out", f.out, "working/output directory");
  auto *o_tb = app.add_option("--theta-build", f.theta_build, "relevance threshold for pattern databases");
  auto *o_trel = app.add_option("--theta-rel", f.theta_rel, "relevance threshold for graph edges");
  auto *o_trd = app.add_option("--theta-rd", f.theta_rd, "RDScore threshold for graph edges");
  auto *o_mod = app.add_option("--modifying-deps", f.modifying_deps,
                               "comma-separated modifying dependency labels");
  auto *o_hops = app.add_option("--max-hops", f.max_hops, "maximum reasoning path length");
  auto *o_m = app.add_option("--m", f.m, "number of reasoning paths to retrieve");
  auto *o_minp = app.add_option("--min-paths", f.min_paths, "minimum paths for a dataset record");
  auto *o_seed = app.add_option("--seed", f.seed, "dataset shuffle seed");
  auto *o_workers = app.add_option("--workers", f.workers, "worker threads (0 = all cores)");

  auto *ingest = app.add_subcommand("ingest", "corpus -> candidate descriptions");
  auto *patterns = app.add_subcommand("build-patterns", "candidates -> pattern databases");
  auto *score = app.add_subcommand("score", "candidates + databases -> scored candidates");
  auto *build_graph = app.add_subcommand("build-graph", "scored candidates -> graph");
  auto *stats = app.add_subcommand("stats", "graph statistics");
  auto *export_ds = app.add_subcommand("export-dataset", "graph -> generation dataset");
  auto *pipeline = app.add_subcommand("pipeline", "ingest through export-dataset");

  std::string x, y;
  bool exclude_direct = false;
  auto *query = app.add_subcommand("query", "relation description of an entity pair");
  query->add_option("x", x)->required();
  query->add_option("y", y)->required();
  auto *paths = app.add_subcommand("paths", "ranked reasoning paths between two entities");
  paths->add_option("x", x)->required();
  paths->add_option("y", y)->required();
  paths->add_flag("--exclude-direct", exclude_direct, "skip the direct x-y edge");
  auto *encode = app.add_subcommand("encode", "generator input strings for an entity pair");
  encode->add_option("x", x)->required();
  encode->add_option("y", y)->required();
  encode->add_flag("--exclude-direct", exclude_direct, "skip the direct x-y edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    dkg::PipelineConfig cfg;
    if (o_config->count()) dkg::LoadConfigFile(&cfg, f.config);
    if (o_corpus->count()) cfg.corpus = f.corpus;
    if (o_emb->count()) cfg.embeddings = f.embeddings;
    if (o_out->count()) cfg.out = f.out;
    if (o_tb->count()) cfg.theta_build = f.theta_build;
    if (o_trel->count()) cfg.theta_rel = f.theta_rel;
    if (o_trd->count()) cfg.theta_rd = f.theta_rd;
    if (o_mod->count()) dkg::SetConfigValue(&cfg, "modifying_deps", f.modifying_deps, "--modifying-deps");
    if (o_hops->count()) cfg.max_hops = f.max_hops;
    if (o_m->count()) cfg.m = f.m;
    if (o_minp->count()) cfg.min_paths = f.min_paths;
    if (o_seed->count()) cfg.seed = f.seed;
    if (o_workers->count()) {
      dkg::SetConfigValue(&cfg, "workers", std::to_string(f.workers), "--workers");
    }
    cfg.Validate();
    const dkg::Layout layout{cfg.out};

    if (ingest->parsed()) {
      PrintCounters(dkg::RunIngest(cfg));
    } else if (patterns->parsed()) {
      PrintCounters(dkg::RunBuildPatterns(cfg));
    } else if (score->parsed()) {
      std::cout << "scored\t" << dkg::RunScore(cfg) << "\n";
    } else if (build_graph->parsed() || stats->parsed()) {
      const dkg::GraphStats s = build_graph->parsed()
                                    ? dkg::RunBuildGraph(cfg)
                                    : dkg::DescriptiveGraph::Load(layout.graph()).Stats();
      std::cout << "nodes\t" << s.nodes << "\nedges\t" << s.edges << "\nmean_sentence_length\t"
                << dkg::FormatFixed(s.mean_sentence_length) << "\n";
    } else if (export_ds->parsed() || pipeline->parsed()) {
      if (pipeline->parsed()) {
        dkg::RunIngest(cfg);
        dkg::RunBuildPatterns(cfg);
        dkg::RunScore(cfg);
        dkg::RunBuildGraph(cfg);
      }
      const dkg::DatasetSplits s = dkg::RunExportDataset(cfg);
      std::cout << "train\t" << s.train.size() << "\nvalid\t" << s.valid.size() << "\ntest\t"
                << s.test.size() << "\nedges_below_min_paths\t" << s.edges_below_min_paths << "\n";
    } else if (query->parsed()) {
      const auto g = dkg::DescriptiveGraph::Load(layout.graph());
      RequireEntities(g, x, y);
      const dkg::Edge *e = g.FindEdge(x, y);
      if (e == nullptr) {
        std::cout << "no edge\n";
        return kEmptyResult;
      }
      std::cout << dkg::FormatFixed(e->rd) << "\t" << e->sentence << "\n";
    } else if (paths->parsed() || encode->parsed()) {
      const auto g = dkg::DescriptiveGraph::Load(layout.graph());
      RequireEntities(g, x, y);
      const dkg::PathQuery q = dkg::RankAndRetrieve(g, x, y, static_cast<size_t>(cfg.m),
                                                    cfg.max_hops, exclude_direct);
      if (encode->parsed()) {
        for (const std::string &s : dkg::EncodeInput(x, y, q.paths)) std::cout << s << "\n";
      } else {
        if (q.paths.empty()) {
          std::cout << "no paths\n";
          return kEmptyResult;
        }
        PrintPaths(q.paths);
      }
    }
  } catch (const dkg::Error &e) {
    std::cerr << "dkg: " << CategoryName(e.kind()) << ": " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "dkg: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
