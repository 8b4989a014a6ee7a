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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace dkg {
namespace {

using testing::BfsDistances;
using testing::BfsNodePath;
using testing::MakeTokens;
using testing::RandomTree;
using testing::S1Tokens;
using testing::StepsAlong;
using testing::StepsOf;

DependencyPath MakePath(int start, std::vector<PathStep> steps) {
  return DependencyPath{start, std::move(steps)};
}

TEST(DependencyTree, RejectsCyclesAndBadHeads) {
  EXPECT_FALSE(DependencyTree::Validate(S1Tokens()).has_value());
  EXPECT_TRUE(DependencyTree::Validate(MakeTokens({{"a", 2, "x"}, {"b", 1, "y"}})).has_value());
  EXPECT_TRUE(DependencyTree::Validate(MakeTokens({{"a", 0, "ROOT"}, {"b", 0, "ROOT"}})).has_value());
  EXPECT_TRUE(DependencyTree::Validate(MakeTokens({{"a", 0, "ROOT"}, {"b", 7, "x"}})).has_value());
  EXPECT_THROW(DependencyTree(MakeTokens({{"a", 1, "x"}})), Error);
}

TEST(MentionHead, CompoundSpanResolvesToGovernor) {
  const DependencyTree tree(S1Tokens());
  EXPECT_EQ(MentionHead(tree, 1, 2), 2);  // "Machine learning" -> learning
}

TEST(MentionHead, SingleToken) {
  const DependencyTree tree(S1Tokens());
  EXPECT_EQ(MentionHead(tree, 9, 9), 9);
}

TEST(MentionHead, NonConstituentSpanTakesLeftmost) {
  // "the study": only study governs from outside. "and construction": both
  // tokens hang off study, outside the span.
  const DependencyTree tree(S1Tokens());
  EXPECT_EQ(MentionHead(tree, 4, 5), 5);
  EXPECT_EQ(MentionHead(tree, 6, 7), 6);
}

TEST(CorePath, SentenceOneGolden) {
  const DependencyTree tree(S1Tokens());
  const DependencyPath p = CorePath(tree, 2, 9);
  EXPECT_EQ(p.nodes(), (std::vector<int>{2, 3, 5, 8, 9}));
  const std::vector<std::pair<std::string, bool>> want = {
      {"nsubj", true}, {"dobj", false}, {"prep", false}, {"pobj", false}};
  EXPECT_EQ(StepsOf(p), want);
  EXPECT_EQ(CorePattern(p).ToString(), "i_nsubj|dobj|prep|pobj");
}

TEST(CorePath, ChildToParentIsSingleInverseStep) {
  const DependencyTree tree(S1Tokens());
  const DependencyPath p = CorePath(tree, 9, 8);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0], (PathStep{"pobj", true, 8}));
}

TEST(CorePath, MatchesBfsOnRandomTrees) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const auto tokens = RandomTree(rng, n);
    const DependencyTree tree(tokens);
    std::uniform_int_distribution<int> pick(1, n);
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    const DependencyPath p = CorePath(tree, a, b);
    const std::vector<int> want = BfsNodePath(tokens, a, b);
    ASSERT_EQ(p.nodes(), want) << "trial " << trial;
    ASSERT_EQ(StepsOf(p), StepsAlong(tokens, want)) << "trial " << trial;
  }
}

TEST(CorePath, ReversalFlipsStepsAndPattern) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const DependencyTree tree(RandomTree(rng, n));
    std::uniform_int_distribution<int> pick(1, n);
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    const DependencyPath ab = CorePath(tree, a, b);
    const DependencyPath ba = CorePath(tree, b, a);
    ASSERT_EQ(ab.Reversed(), ba);
    // Element-reversed, direction-flipped pattern built from the raw steps.
    RelationPattern flipped;
    for (size_t i = ab.steps.size(); i-- > 0;) {
      const PathStep &s = ab.steps[i];
      std::string e = PatternElement(s.deprel, !s.inverse);
      if (CoreDropLabels().count(s.deprel)) continue;
      if (s.deprel == "prep" && !flipped.empty() && flipped.labels.back() == e) continue;
      flipped.labels.push_back(e);
    }
    ASSERT_EQ(CorePattern(ba), flipped);
  }
}

TEST(CorePattern, DropsConj) {
  const auto p = MakePath(1, {{"nsubj", true, 2}, {"conj", false, 3}});
  EXPECT_EQ(CorePattern(p).ToString(), "i_nsubj");
}

TEST(CorePattern, CollapsesEqualDirectionPrep) {
  const auto p = MakePath(
      1, {{"nsubj", true, 2}, {"prep", false, 3}, {"prep", false, 4}, {"pobj", false, 5}});
  EXPECT_EQ(CorePattern(p).ToString(), "i_nsubj|prep|pobj");
}

TEST(CorePattern, KeepsOppositeDirectionPrep) {
  const auto p = MakePath(1, {{"prep", true, 2}, {"prep", false, 3}});
  EXPECT_EQ(CorePattern(p).ToString(), "i_prep|prep");
}

TEST(CorePattern, NoDroppedLabelsOnRandomTrees) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const DependencyTree tree(RandomTree(rng, n));
    const DependencyPath core = CorePath(tree, 1, n);
    for (const std::string &e : CorePattern(core).labels) {
      ASSERT_NE(e, "conj");
      ASSERT_NE(e, "appos");
      ASSERT_NE(e, "i_conj");
      ASSERT_NE(e, "i_appos");
    }
    for (const auto &[token, path] : SubPaths(tree, core)) {
      for (const std::string &e : SubPattern(path).labels) {
        for (const char *bad : {"conj", "appos", "compound"}) {
          ASSERT_NE(e, bad);
          ASSERT_NE(e, std::string("i_") + bad);
        }
      }
    }
  }
}

TEST(NormalizeSubjectFirst, SubjectFirstUnchanged) {
  const auto p = MakePath(1, {{"nsubj", true, 2}, {"dobj", false, 3}});
  const NormalizedCore n = NormalizeSubjectFirst(p);
  EXPECT_FALSE(n.reversed);
  EXPECT_TRUE(n.subject_first);
  EXPECT_EQ(n.pattern.ToString(), "i_nsubj|dobj");
  EXPECT_EQ(n.path, p);
}

TEST(NormalizeSubjectFirst, TrailingSubjectIsReversed) {
  const auto p = MakePath(3, {{"dobj", true, 2}, {"nsubj", false, 1}});
  const NormalizedCore n = NormalizeSubjectFirst(p);
  EXPECT_TRUE(n.reversed);
  EXPECT_TRUE(n.subject_first);
  EXPECT_EQ(n.pattern.ToString(), "i_nsubj|dobj");
  EXPECT_EQ(n.path.start, 1);
  EXPECT_EQ(n.path.end(), 3);
}

TEST(NormalizeSubjectFirst, NonSubjectFlagged) {
  const auto p = MakePath(1, {{"dobj", true, 2}, {"prep", false, 3}, {"pobj", false, 4}});
  const NormalizedCore n = NormalizeSubjectFirst(p);
  EXPECT_FALSE(n.reversed);
  EXPECT_FALSE(n.subject_first);
  EXPECT_EQ(n.pattern.ToString(), "i_dobj|prep|pobj");
}

TEST(SubPaths, ConstructionHangsOffStudy) {
  const DependencyTree tree(S1Tokens());
  const auto subs = SubPaths(tree, CorePath(tree, 2, 9));
  const DependencyPath &p = subs.at(7);
  EXPECT_EQ(p.start, 5);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0], (PathStep{"conj", false, 7}));
  EXPECT_TRUE(SubPattern(p).empty());
}

TEST(SubPaths, DirectAmodChild) {
  const auto tokens = MakeTokens({{"Bob", 2, "nsubj"}, {"eats", 0, "ROOT"},
                                  {"red", 4, "amod"}, {"apples", 2, "dobj"}});
  const DependencyTree tree(tokens);
  const auto subs = SubPaths(tree, CorePath(tree, 1, 4));
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_EQ(StepsOf(subs.at(3)), (std::vector<std::pair<std::string, bool>>{{"amod", false}}));
  EXPECT_EQ(SubPattern(subs.at(3)).ToString(), "amod");
}

TEST(SubPaths, MatchesBfsOnRandomTrees) {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const auto tokens = RandomTree(rng, n);
    const DependencyTree tree(tokens);
    std::uniform_int_distribution<int> pick(1, n);
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    const DependencyPath core = CorePath(tree, a, b);
    const std::vector<int> core_nodes = BfsNodePath(tokens, a, b);
    const std::set<int> core_set(core_nodes.begin(), core_nodes.end());
    const auto subs = SubPaths(tree, core);
    ASSERT_EQ(subs.size() + core_set.size(), static_cast<size_t>(n));
    const std::vector<int> dist = BfsDistances(tokens, core_nodes);
    for (int t = 1; t <= n; ++t) {
      if (core_set.count(t)) {
        ASSERT_EQ(subs.count(t), 0u);
        continue;
      }
      // Nearest core node: argmin BFS distance from t, leftmost on ties.
      int nearest = 0, best = INT32_MAX;
      for (int c : core_nodes) {
        const int d = static_cast<int>(BfsNodePath(tokens, c, t).size()) - 1;
        if (d < best || (d == best && c < nearest)) {
          best = d;
          nearest = c;
        }
      }
      const std::vector<int> want = BfsNodePath(tokens, nearest, t);
      const DependencyPath &got = subs.at(t);
      ASSERT_EQ(got.nodes(), want) << "trial " << trial << " token " << t;
      ASSERT_EQ(StepsOf(got), StepsAlong(tokens, want));
      ASSERT_EQ(static_cast<int>(got.steps.size()), dist[t]);
    }
  }
}

TEST(SubPattern, Examples) {
  EXPECT_TRUE(SubPattern(MakePath(1, {{"conj", false, 2}})).empty());
  EXPECT_EQ(SubPattern(MakePath(1, {{"amod", false, 2}})).ToString(), "amod");
  EXPECT_EQ(SubPattern(MakePath(1, {{"prep", false, 2}, {"prep", false, 3}, {"pobj", false, 4}}))
                .ToString(),
            "prep|pobj");
  EXPECT_EQ(SubPattern(MakePath(1, {{"compound", false, 2}, {"amod", false, 3}})).ToString(), "amod");
}

TEST(SubPattern, PrefixClosedAlongEveryPath) {
  std::mt19937 rng(15);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const DependencyTree tree(RandomTree(rng, n));
    const DependencyPath core = CorePath(tree, 1, n);
    const auto subs = SubPaths(tree, core);
    for (const auto &[token, path] : subs) {
      const RelationPattern full = SubPattern(path);
      for (size_t k = 1; k < path.steps.size(); ++k) {
        DependencyPath prefix{path.start, {path.steps.begin(), path.steps.begin() + k}};
        ASSERT_TRUE(SubPattern(prefix).IsPrefixOf(full));
        // The prefix is also exactly the sub path of the token it ends at.
        ASSERT_EQ(subs.at(prefix.end()), prefix);
      }
    }
  }
}

TEST(ClassifyTokens, SentenceOneCategories) {
  const DependencyTree tree(S1Tokens());
  const DependencyPath core = CorePath(tree, 2, 9);
  const auto cats =
      ClassifyTokens(tree, core, SubPaths(tree, core), DefaultModifyingDependencies());
  using Kind = TokenCategory::Kind;
  for (int t : {2, 3, 5, 8, 9}) EXPECT_EQ(cats[t - 1].kind, Kind::kCore) << t;
  // conj-attached, and compound-attached, tokens of the core are core.
  EXPECT_EQ(cats[7 - 1].kind, Kind::kCore);
  EXPECT_EQ(cats[1 - 1].kind, Kind::kCore);
  EXPECT_EQ(cats[4 - 1].kind, Kind::kModifying);
  EXPECT_EQ(cats[4 - 1].pattern.ToString(), "det");
  EXPECT_EQ(cats[18 - 1].kind, Kind::kModifying);
  EXPECT_EQ(cats[18 - 1].pattern.ToString(), "relcl|dobj|prep|pobj");
  EXPECT_EQ(cats[15 - 1].pattern.ToString(), "relcl");  // conj dropped
  // The coordinator of "study and construction" hangs off a core token via
  // cc, which is not a modifying dependency. Every other token counts.
  EXPECT_EQ(cats[6 - 1].kind, Kind::kIrrelevant);
  for (int t = 1; t <= tree.size(); ++t) {
    if (t == 6) continue;
    EXPECT_NE(cats[t - 1].kind, Kind::kIrrelevant) << t;
  }
}

TEST(ClassifyTokens, CcIsIrrelevant) {
  const auto tokens = MakeTokens({{"Bob", 2, "nsubj"}, {"eats", 0, "ROOT"}, {"apples", 2, "dobj"},
                                  {"and", 2, "cc"}, {"sleeps", 2, "conj"}});
  const DependencyTree tree(tokens);
  const DependencyPath core = CorePath(tree, 1, 3);
  const auto cats =
      ClassifyTokens(tree, core, SubPaths(tree, core), DefaultModifyingDependencies());
  EXPECT_EQ(cats[3].kind, TokenCategory::Kind::kIrrelevant);
  EXPECT_EQ(cats[4].kind, TokenCategory::Kind::kCore);  // only conj on the way
}

TEST(ClassifyTokens, InverseFirstStepIsIrrelevant) {
  // Core inside a relative clause; everything above its root is reached by
  // an inverse step.
  const auto tokens = MakeTokens({{"People", 0, "ROOT"}, {"who", 3, "nsubj"}, {"love", 1, "relcl"},
                                  {"cats", 3, "dobj"}});
  const DependencyTree tree(tokens);
  const DependencyPath core = CorePath(tree, 2, 4);
  const auto cats =
      ClassifyTokens(tree, core, SubPaths(tree, core), DefaultModifyingDependencies());
  EXPECT_EQ(cats[0].kind, TokenCategory::Kind::kIrrelevant);
}

TEST(ClassifyTokens, EveryTokenGetsOneCategory) {
  std::mt19937 rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const DependencyTree tree(RandomTree(rng, n));
    const DependencyPath core = CorePath(tree, 1, n);
    const auto subs = SubPaths(tree, core);
    const auto cats = ClassifyTokens(tree, core, subs, DefaultModifyingDependencies());
    ASSERT_EQ(cats.size(), static_cast<size_t>(n));
    for (int t = 1; t <= n; ++t) {
      if (cats[t - 1].kind != TokenCategory::Kind::kModifying) {
        ASSERT_TRUE(cats[t - 1].pattern.empty());
      } else {
        ASSERT_EQ(cats[t - 1].pattern, SubPattern(subs.at(t)));
      }
    }
  }
}

TEST(RelationPattern, ParseRoundTrip) {
  EXPECT_EQ(RelationPattern::Parse("i_nsubj|dobj").labels,
            (std::vector<std::string>{"i_nsubj", "dobj"}));
  EXPECT_TRUE(RelationPattern::Parse("").empty());
  EXPECT_EQ(RelationPattern().ToString(), "");
  EXPECT_TRUE(RelationPattern::Parse("amod").IsPrefixOf(RelationPattern::Parse("amod|advmod")));
  EXPECT_FALSE(RelationPattern::Parse("amod|advmod").IsPrefixOf(RelationPattern::Parse("amod")));
}

}  // namespace
}  // namespace dkg
