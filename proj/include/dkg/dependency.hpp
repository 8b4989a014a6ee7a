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
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dkg/error.hpp"
#include "dkg/pattern.hpp"

namespace dkg {

// One token of a dependency-parsed sentence. Indices are 1-based and a head
// of 0 marks the root, as in CoNLL-U.
struct Token {
  int index = 0;
  std::string text;
  int head = 0;
  std::string deprel;

  bool operator==(const Token &) const = default;
};

// Immutable view over a validated dependency tree.
class DependencyTree {
 public:
  // Returns a description of the first violated tree invariant, or nullopt.
  static std::optional<std::string> Validate(const std::vector<Token> &tokens) {
    const int n = static_cast<int>(tokens.size());
    if (n == 0) return "empty sentence";
    int roots = 0;
    for (int i = 0; i < n; ++i) {
      const Token &t = tokens[i];
      if (t.index != i + 1) {
        return "token " + std::to_string(i + 1) + " has index " +
               std::to_string(t.index);
      }
      if (t.head < 0 || t.head > n) {
        return "token " + std::to_string(t.index) + " head out of range";
      }
      if (t.head == t.index) {
        return "token " + std::to_string(t.index) + " is its own head";
      }
      if (t.head == 0) ++roots;
    }
    if (roots != 1) return "expected exactly one root, found " + std::to_string(roots);
    // Every token must reach the root without revisiting a node.
    std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on stack, 2 done
    for (int i = 1; i <= n; ++i) {
      std::vector<int> chain;
      int cur = i;
      while (cur != 0 && state[cur] == 0) {
        state[cur] = 1;
        chain.push_back(cur);
        cur = tokens[cur - 1].head;
      }
      if (cur != 0 && state[cur] == 1) {
        return "cycle through token " + std::to_string(cur);
      }
      for (int c : chain) state[c] = 2;
    }
    return std::nullopt;
  }

  explicit DependencyTree(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (auto err = Validate(tokens_)) {
      throw Error(ErrorKind::kMalformedInput, "invalid dependency tree: " + *err);
    }
    const int n = size();
    children_.assign(n + 1, {});
    depth_.assign(n + 1, 0);
    for (const Token &t : tokens_) {
      if (t.head == 0) {
        root_ = t.index;
      } else {
        children_[t.head].push_back(t.index);
      }
    }
    // Depths by walking from the root; children lists are already ascending.
    std::vector<int> stack = {root_};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int c : children_[u]) {
        depth_[c] = depth_[u] + 1;
        stack.push_back(c);
      }
    }
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  int root() const { return root_; }
  const Token &token(int index) const { return tokens_[index - 1]; }
  const std::vector<Token> &tokens() const { return tokens_; }
  int head(int index) const { return tokens_[index - 1].head; }
  const std::string &deprel(int index) const { return tokens_[index - 1].deprel; }
  const std::vector<int> &children(int index) const { return children_[index]; }
  int depth(int index) const { return depth_[index]; }

  // Undirected neighbours in ascending index order.
  std::vector<int> neighbors(int index) const {
    std::vector<int> out = children_[index];
    if (head(index) != 0) out.push_back(head(index));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Token> tokens_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  int root_ = 0;
};

struct PathStep {
  std::string deprel;
  bool inverse = false;
  int token = 0;  // token entered by this step

  bool operator==(const PathStep &) const = default;
};

struct DependencyPath {
  int start = 0;
  std::vector<PathStep> steps;

  int end() const { return steps.empty() ? start : steps.back().token; }

  std::vector<int> nodes() const {
    std::vector<int> out = {start};
    for (const PathStep &s : steps) out.push_back(s.token);
    return out;
  }

  // Same path walked from the other end: order reversed, directions flipped.
  DependencyPath Reversed() const {
    DependencyPath out;
    out.start = end();
    const std::vector<int> n = nodes();
    for (size_t i = steps.size(); i-- > 0;) {
      out.steps.push_back({steps[i].deprel, !steps[i].inverse, n[i]});
    }
    return out;
  }

  bool operator==(const DependencyPath &) const = default;
};

// Step from u to an adjacent node v.
inline PathStep StepBetween(const DependencyTree &tree, int u, int v) {
  if (tree.head(v) == u) return {tree.deprel(v), false, v};
  return {tree.deprel(u), true, v};
}

// Syntactic head of a mention: the span token whose governor lies outside the
// span (or is the root). Leftmost wins when several qualify.
inline int MentionHead(const DependencyTree &tree, int start, int end) {
  for (int i = start; i <= end; ++i) {
    int h = tree.head(i);
    if (h == 0 || h < start || h > end) return i;
  }
  return start;  // unreachable for a valid tree
}

// Unique tree path from `from` up to the lowest common ancestor and down to
// `to`. Upward steps are inverse.
inline DependencyPath CorePath(const DependencyTree &tree, int from, int to) {
  std::vector<int> up_from = {from};
  std::vector<int> up_to = {to};
  int a = from, b = to;
  while (tree.depth(a) > tree.depth(b)) { a = tree.head(a); up_from.push_back(a); }
  while (tree.depth(b) > tree.depth(a)) { b = tree.head(b); up_to.push_back(b); }
  while (a != b) {
    a = tree.head(a); up_from.push_back(a);
    b = tree.head(b); up_to.push_back(b);
  }
  DependencyPath path;
  path.start = from;
  for (size_t i = 0; i + 1 < up_from.size(); ++i) {
    path.steps.push_back({tree.deprel(up_from[i]), true, up_from[i + 1]});
  }
  for (size_t i = up_to.size() - 1; i-- > 0;) {
    path.steps.push_back({tree.deprel(up_to[i]), false, up_to[i]});
  }
  return path;
}

inline const std::set<std::string> &CoreDropLabels() {
  static const std::set<std::string> labels = {"conj", "appos"};
  return labels;
}

inline const std::set<std::string> &SubDropLabels() {
  static const std::set<std::string> labels = {"conj", "appos", "compound"};
  return labels;
}

// Labels with i_ prefixes, dropped labels removed, then runs of equal-direction
// prep collapsed to a single element.
inline RelationPattern BuildPattern(const DependencyPath &path,
                                    const std::set<std::string> &drop) {
  RelationPattern pattern;
  for (const PathStep &s : path.steps) {
    if (drop.count(s.deprel)) continue;
    std::string element = PatternElement(s.deprel, s.inverse);
    if (s.deprel == "prep" && !pattern.labels.empty() &&
        pattern.labels.back() == element) {
      continue;
    }
    pattern.labels.push_back(std::move(element));
  }
  return pattern;
}

inline RelationPattern CorePattern(const DependencyPath &path) {
  return BuildPattern(path, CoreDropLabels());
}

inline RelationPattern SubPattern(const DependencyPath &path) {
  return BuildPattern(path, SubDropLabels());
}

inline bool IsSubjectLabel(std::string_view label) {
  return label == "nsubj" || label == "nsubjpass";
}

struct NormalizedCore {
  DependencyPath path;
  RelationPattern pattern;
  bool reversed = false;
  bool subject_first = false;  // pattern starts with i_nsubj / i_nsubjpass
};

// Orients the core path so that the subject entity comes first. A pattern
// that neither starts with an inverse subject nor ends with a forward one is
// left as is and flagged non-subject.
inline NormalizedCore NormalizeSubjectFirst(const DependencyPath &path) {
  auto starts_with_subject = [](const RelationPattern &p) {
    if (p.empty()) return false;
    const std::string &first = p.labels.front();
    return first.rfind(kInversePrefix, 0) == 0 &&
           IsSubjectLabel(std::string_view(first).substr(kInversePrefix.size()));
  };
  NormalizedCore out;
  out.path = path;
  out.pattern = CorePattern(path);
  if (starts_with_subject(out.pattern)) {
    out.subject_first = true;
    return out;
  }
  if (!out.pattern.empty() && IsSubjectLabel(out.pattern.labels.back())) {
    out.path = path.Reversed();
    out.pattern = CorePattern(out.path);
    out.reversed = true;
    out.subject_first = starts_with_subject(out.pattern);
  }
  return out;
}

// For every token off the core path, the tree path from its nearest core node
// to it.
inline std::map<int, DependencyPath> SubPaths(const DependencyTree &tree,
                                              const DependencyPath &core) {
  std::map<int, DependencyPath> paths;
  std::vector<bool> seen(tree.size() + 1, false);
  std::queue<int> frontier;
  const std::vector<int> core_list = core.nodes();
  const std::set<int> core_nodes(core_list.begin(), core_list.end());
  for (int node : core_list) {
    if (!seen[node]) {
      seen[node] = true;
      frontier.push(node);
    }
  }
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : tree.neighbors(u)) {
      if (seen[v]) continue;
      seen[v] = true;
      DependencyPath p;
      if (core_nodes.count(u)) {
        p.start = u;
      } else {
        p = paths.at(u);
      }
      p.steps.push_back(StepBetween(tree, u, v));
      paths.emplace(v, std::move(p));
      frontier.push(v);
    }
  }
  return paths;
}

// Dependencies whose subtrees modify the relation (spaCy label scheme).
inline std::set<std::string> DefaultModifyingDependencies() {
  return {"acl",   "advcl",    "advmod", "amod",   "det",      "mark",
          "meta",  "neg",      "nn",     "nmod",   "npmod",    "nummod",
          "poss",  "prep",     "quantmod", "relcl", "appos",   "aux",
          "auxpass", "compound", "cop",  "ccomp",  "xcomp",    "expl",
          "punct", "nsubj",    "csubj",  "csubjpass", "dobj",  "iobj",
          "obj",   "pobj"};
}

struct TokenCategory {
  enum class Kind { kCore, kModifying, kIrrelevant };

  Kind kind = Kind::kIrrelevant;
  RelationPattern pattern;  // sub pattern, set for modifying tokens

  bool operator==(const TokenCategory &) const = default;
};

// Core-path tokens are core. Off-core tokens are decided by the first
// non-dropped element of their sub path: none left means core, a forward
// label from `modifying` means modifying, anything else irrelevant.
inline std::vector<TokenCategory> ClassifyTokens(
    const DependencyTree &tree, const DependencyPath &core,
    const std::map<int, DependencyPath> &sub_paths,
    const std::set<std::string> &modifying) {
  std::vector<TokenCategory> categories(tree.size());
  for (int node : core.nodes()) categories[node - 1].kind = TokenCategory::Kind::kCore;
  for (const auto &[token, path] : sub_paths) {
    TokenCategory &cat = categories[token - 1];
    const PathStep *decisive = nullptr;
    for (const PathStep &s : path.steps) {
      if (!SubDropLabels().count(s.deprel)) {
        decisive = &s;
        break;
      }
    }
    if (decisive == nullptr) {
      cat.kind = TokenCategory::Kind::kCore;
    } else if (!decisive->inverse && modifying.count(decisive->deprel)) {
      cat.kind = TokenCategory::Kind::kModifying;
      cat.pattern = SubPattern(path);
    } else {
      cat.kind = TokenCategory::Kind::kIrrelevant;
    }
  }
  return categories;
}

}  // namespace dkg
