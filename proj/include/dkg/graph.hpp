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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dkg/dependency.hpp"
#include "dkg/error.hpp"
#include "dkg/scoring.hpp"

namespace dkg {

inline constexpr double kDefaultRelevanceThreshold = 0.5;
inline constexpr double kDefaultRdThreshold = 0.6;
inline constexpr size_t kAuditDepth = 5;

// The (x, s, y) fact stored on an undirected edge.
struct Edge {
  std::string sentence;
  double rd = 0.0;
  double relevance = 0.0;
  std::string doc_id;
  int sent_idx = 0;
  std::string subject;  // endpoint that is the grammatical subject

  bool operator==(const Edge &) const = default;
};

struct EdgeRecord {
  std::string a;  // a < b
  std::string b;
  Edge edge;

  bool operator==(const EdgeRecord &) const = default;
};

struct GraphStats {
  size_t nodes = 0;
  size_t edges = 0;
  double mean_sentence_length = 0.0;
};

inline size_t CountWords(const std::string &sentence) {
  size_t n = 0;
  bool in_word = false;
  for (char c : sentence) {
    bool space = c == ' ' || c == '\t' || c == '\n';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

// Undirected descriptive graph. Immutable once constructed.
class DescriptiveGraph {
 public:
  struct Adjacent {
    int node;
    int edge;
  };

  DescriptiveGraph() = default;

  DescriptiveGraph(const std::set<std::string> &nodes, std::vector<EdgeRecord> edges)
      : names_(nodes.begin(), nodes.end()), edges_(std::move(edges)) {
    for (size_t i = 0; i < names_.size(); ++i) ids_.emplace(names_[i], static_cast<int>(i));
    std::sort(edges_.begin(), edges_.end(), [](const EdgeRecord &x, const EdgeRecord &y) {
      return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    adjacency_.assign(names_.size(), {});
    for (size_t i = 0; i < edges_.size(); ++i) {
      const EdgeRecord &e = edges_[i];
      if (!(e.a < e.b)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "edge endpoints not in canonical order: " + e.a + " / " + e.b);
      }
      if (i > 0 && edges_[i - 1].a == e.a && edges_[i - 1].b == e.b) {
        throw Error(ErrorKind::kInvalidArgument, "duplicate edge " + e.a + " / " + e.b);
      }
      int ia = NodeId(e.a), ib = NodeId(e.b);
      if (ia < 0 || ib < 0) {
        throw Error(ErrorKind::kInvalidArgument,
                    "edge endpoint missing from node set: " + (ia < 0 ? e.a : e.b));
      }
      adjacency_[ia].push_back({ib, static_cast<int>(i)});
      adjacency_[ib].push_back({ia, static_cast<int>(i)});
    }
    // Node ids follow lexicographic order, so sorting by id sorts by name.
    for (auto &adj : adjacency_) {
      std::sort(adj.begin(), adj.end(),
                [](const Adjacent &x, const Adjacent &y) { return x.node < y.node; });
    }
  }

  static DescriptiveGraph FromEdges(std::vector<EdgeRecord> edges) {
    std::set<std::string> nodes;
    for (const EdgeRecord &e : edges) {
      nodes.insert(e.a);
      nodes.insert(e.b);
    }
    return DescriptiveGraph(nodes, std::move(edges));
  }

  size_t node_count() const { return names_.size(); }
  size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string> &nodes() const { return names_; }
  const std::vector<EdgeRecord> &edges() const { return edges_; }
  bool HasNode(const std::string &x) const { return ids_.count(x) > 0; }

  int NodeId(const std::string &x) const {
    auto it = ids_.find(x);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::string &NodeName(int id) const { return names_[id]; }
  const std::vector<Adjacent> &AdjacentTo(int id) const { return adjacency_[id]; }
  const EdgeRecord &EdgeAt(int index) const { return edges_[index]; }

  const Edge *FindEdge(const std::string &x, const std::string &y) const {
    int ix = NodeId(x), iy = NodeId(y);
    if (ix < 0 || iy < 0) return nullptr;
    for (const Adjacent &adj : adjacency_[ix]) {
      if (adj.node == iy) return &edges_[adj.edge].edge;
    }
    return nullptr;
  }

  // Sorted by neighbour title.
  std::vector<std::pair<std::string, const Edge *>> Neighbors(const std::string &x) const {
    std::vector<std::pair<std::string, const Edge *>> out;
    int ix = NodeId(x);
    if (ix < 0) return out;
    for (const Adjacent &adj : adjacency_[ix]) {
      out.emplace_back(names_[adj.node], &edges_[adj.edge].edge);
    }
    return out;
  }

  GraphStats Stats() const {
    GraphStats s;
    s.nodes = names_.size();
    s.edges = edges_.size();
    if (!edges_.empty()) {
      double total = 0.0;
      for (const EdgeRecord &e : edges_) total += static_cast<double>(CountWords(e.edge.sentence));
      s.mean_sentence_length = total / static_cast<double>(edges_.size());
    }
    return s;
  }

  bool operator==(const DescriptiveGraph &o) const {
    return names_ == o.names_ && edges_ == o.edges_;
  }

  void Save(const std::filesystem::path &dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream nodes(dir / "nodes.tsv", std::ios::binary);
    std::ofstream edges(dir / "edges.tsv", std::ios::binary);
    if (!nodes || !edges) throw Error(ErrorKind::kMissingInput, "cannot write graph to " + dir.string());
    for (const std::string &n : names_) nodes << EscapeField(n) << "\n";
    for (const EdgeRecord &e : edges_) {
      edges << EscapeField(e.a) << "\t" << EscapeField(e.b) << "\t" << FormatFixed(e.edge.rd)
            << "\t" << FormatFixed(e.edge.relevance) << "\t" << EscapeField(e.edge.doc_id)
            << "\t" << e.edge.sent_idx << "\t" << EscapeField(e.edge.subject) << "\t"
            << EscapeField(e.edge.sentence) << "\n";
    }
  }

  static DescriptiveGraph Load(const std::filesystem::path &dir) {
    const std::string nodes_path = (dir / "nodes.tsv").string();
    const std::string edges_path = (dir / "edges.tsv").string();
    std::ifstream nodes_in(nodes_path, std::ios::binary);
    if (!nodes_in) throw Error(ErrorKind::kMissingInput, "cannot open " + nodes_path);
    std::ifstream edges_in(edges_path, std::ios::binary);
    if (!edges_in) throw Error(ErrorKind::kMissingInput, "cannot open " + edges_path);

    std::set<std::string> nodes;
    std::string line, field;
    size_t line_no = 0;
    while (std::getline(nodes_in, line)) {
      ++line_no;
      if (!UnescapeField(line, &field) || field.empty()) {
        throw MalformedLine(nodes_path, line_no, "bad node title");
      }
      if (!nodes.insert(field).second) throw MalformedLine(nodes_path, line_no, "duplicate node");
    }

    std::vector<EdgeRecord> edges;
    std::set<std::pair<std::string, std::string>> seen;
    line_no = 0;
    while (std::getline(edges_in, line)) {
      ++line_no;
      std::vector<std::string> cols = Split(line, '\t');
      if (cols.size() != 8) throw MalformedLine(edges_path, line_no, "expected 8 columns");
      std::vector<std::string> f(8);
      for (size_t i = 0; i < 8; ++i) {
        if (!UnescapeField(cols[i], &f[i])) throw MalformedLine(edges_path, line_no, "bad escape");
      }
      EdgeRecord e;
      e.a = f[0];
      e.b = f[1];
      if (!ParseNumber(f[2], &e.edge.rd) || !ParseNumber(f[3], &e.edge.relevance)) {
        throw MalformedLine(edges_path, line_no, "bad score column");
      }
      e.edge.doc_id = f[4];
      char *end = nullptr;
      long idx = std::strtol(f[5].c_str(), &end, 10);
      if (f[5].empty() || *end != '\0' || idx < 0) {
        throw MalformedLine(edges_path, line_no, "bad sent_idx");
      }
      e.edge.sent_idx = static_cast<int>(idx);
      e.edge.subject = f[6];
      e.edge.sentence = f[7];
      if (!(e.a < e.b)) throw MalformedLine(edges_path, line_no, "endpoints not in canonical order");
      if (!nodes.count(e.a) || !nodes.count(e.b)) {
        throw MalformedLine(edges_path, line_no, "edge endpoint missing from nodes.tsv");
      }
      if (e.edge.subject != e.a && e.edge.subject != e.b) {
        throw MalformedLine(edges_path, line_no, "subject is not an endpoint");
      }
      if (!seen.emplace(e.a, e.b).second) throw MalformedLine(edges_path, line_no, "duplicate edge");
      edges.push_back(std::move(e));
    }
    return DescriptiveGraph(nodes, std::move(edges));
  }

 private:
  static bool ParseNumber(const std::string &s, double *out) {
    if (s.empty()) return false;
    char *end = nullptr;
    *out = std::strtod(s.c_str(), &end);
    return *end == '\0';
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

// Ordering used to pick an entity pair's relation description: higher rd
// first, then earlier (doc_id, sent_idx).
inline bool BetterCandidate(const ScoredCandidate &x, const ScoredCandidate &y) {
  if (x.rd != y.rd) return x.rd > y.rd;
  return std::tie(x.candidate.doc_id, x.candidate.sent_idx) <
         std::tie(y.candidate.doc_id, y.candidate.sent_idx);
}

// Index of the best candidate of a non-empty group.
inline size_t SelectBest(const std::vector<ScoredCandidate> &group) {
  size_t best = 0;
  for (size_t i = 1; i < group.size(); ++i) {
    if (BetterCandidate(group[i], group[best])) best = i;
  }
  return best;
}

inline std::string SubjectEntity(const CandidateDescription &c) {
  return NormalizeSubjectFirst(c.core_path).reversed ? c.entity_b : c.entity_a;
}

// Keeps the pairs whose best candidate passes both thresholds. Candidates
// without a relevance value never pass.
inline DescriptiveGraph BuildGraph(const std::vector<ScoredCandidate> &best, double theta_rel,
                                   double theta_rd) {
  std::vector<EdgeRecord> edges;
  for (const ScoredCandidate &s : best) {
    const CandidateDescription &c = s.candidate;
    if (!c.relevance || *c.relevance < theta_rel || s.rd < theta_rd) continue;
    EdgeRecord e;
    e.a = c.entity_a;
    e.b = c.entity_b;
    e.edge = {c.sentence_text, s.rd, *c.relevance, c.doc_id, c.sent_idx, SubjectEntity(c)};
    edges.push_back(std::move(e));
  }
  return DescriptiveGraph::FromEdges(std::move(edges));
}

// Scored candidates grouped by entity pair, each group sorted best first.
inline std::map<std::pair<std::string, std::string>, std::vector<ScoredCandidate>> GroupByPair(
    std::vector<ScoredCandidate> scored) {
  std::map<std::pair<std::string, std::string>, std::vector<ScoredCandidate>> groups;
  for (ScoredCandidate &s : scored) {
    auto key = std::make_pair(s.candidate.entity_a, s.candidate.entity_b);
    groups[key].push_back(std::move(s));
  }
  for (auto &[key, group] : groups) std::sort(group.begin(), group.end(), BetterCandidate);
  return groups;
}

inline std::vector<ScoredCandidate> BestPerPair(
    const std::map<std::pair<std::string, std::string>, std::vector<ScoredCandidate>> &groups) {
  std::vector<ScoredCandidate> best;
  best.reserve(groups.size());
  for (const auto &[key, group] : groups) best.push_back(group[SelectBest(group)]);
  return best;
}

// Top alternatives per pair: entity_a, entity_b, rank, rd, doc_id, sent_idx,
// sentence.
inline void WriteAudit(
    const std::map<std::pair<std::string, std::string>, std::vector<ScoredCandidate>> &groups,
    const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kMissingInput, "cannot write " + path.string());
  for (const auto &[key, group] : groups) {
    for (size_t r = 0; r < group.size() && r < kAuditDepth; ++r) {
      const ScoredCandidate &s = group[r];
      out << EscapeField(key.first) << "\t" << EscapeField(key.second) << "\t" << r + 1 << "\t"
          << FormatFixed(s.rd) << "\t" << EscapeField(s.candidate.doc_id) << "\t"
          << s.candidate.sent_idx << "\t" << EscapeField(s.candidate.sentence_text) << "\n";
    }
  }
}

}  // namespace dkg
