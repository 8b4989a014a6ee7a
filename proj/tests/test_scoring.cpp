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

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace dkg {
namespace {

using testing::MakeCandidate;
using testing::MakeTokens;

constexpr double kTol = 1e-9;

const std::set<std::string> &Modifying() {
  static const std::set<std::string> m = DefaultModifyingDependencies();
  return m;
}

TEST(ExpScore, Examples) {
  PatternDatabase db;
  db.Add("top", 999);
  db.Add("mid", 99);
  EXPECT_DOUBLE_EQ(ExpScore(RelationPattern::Parse("top"), db), 1.0);
  EXPECT_EQ(ExpScore(RelationPattern::Parse("unseen"), db), 0.0);
  // log(100) / log(1000) = 2 / 3 in any base.
  EXPECT_NEAR(ExpScore(RelationPattern::Parse("mid"), db), 2.0 / 3.0, kTol);
  EXPECT_EQ(ExpScore(RelationPattern::Parse("top"), PatternDatabase()), 0.0);
}

TEST(TokenWeight, Examples) {
  PatternDatabase sub(PatternKind::kSub);
  sub.Add("det", 7);
  sub.Add("punct", 15);
  TokenCategory core{TokenCategory::Kind::kCore, {}};
  TokenCategory irrelevant{TokenCategory::Kind::kIrrelevant, {}};
  TokenCategory top{TokenCategory::Kind::kModifying, RelationPattern::Parse("punct")};
  TokenCategory det{TokenCategory::Kind::kModifying, RelationPattern::Parse("det")};
  EXPECT_EQ(TokenWeight(core, sub), 1.0);
  EXPECT_EQ(TokenWeight(irrelevant, sub), 0.0);
  EXPECT_DOUBLE_EQ(TokenWeight(top, sub), 1.0);
  EXPECT_NEAR(TokenWeight(det, sub), 0.75, kTol);  // log 8 / log 16
}

TEST(SigScore, Examples) {
  EXPECT_DOUBLE_EQ(SigScore({1, 1, 1, 1}, 4), 1.0);
  EXPECT_NEAR(SigScore({1, 1, 1, 0}, 4), 0.75, kTol);
  EXPECT_EQ(SigScore({0, 0, 0}, 3), 0.0);
  EXPECT_EQ(SigScore({}, 0), 0.0);
}

TEST(SigScore, IrrelevantTokenLowersCoreTokenRaises) {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> weights(std::uniform_int_distribution<int>(1, 30)(rng));
    for (double &x : weights) x = w(rng);
    if (std::all_of(weights.begin(), weights.end(), [](double x) { return x == 0.0; })) continue;
    const double base = SigScore(weights, weights.size());
    auto with = weights;
    with.push_back(0.0);
    ASSERT_LT(SigScore(with, with.size()), base);
    with.back() = 1.0;
    ASSERT_GE(SigScore(with, with.size()), base);
  }
}

TEST(RdScore, Examples) {
  EXPECT_DOUBLE_EQ(RdScore(1.0, 1.0), 1.0);
  EXPECT_EQ(RdScore(0.0, 0.7), 0.0);
  EXPECT_EQ(RdScore(0.0, 0.0), 0.0);
  EXPECT_NEAR(RdScore(0.5, 1.0), 2.0 / 3.0, kTol);
}

TEST(RdScore, HarmonicMeanProperties) {
  std::mt19937 rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double e = u(rng), s = u(rng);
    const double rd = RdScore(e, s);
    ASSERT_EQ(rd, RdScore(s, e));
    if (e + s > 0) {
      ASSERT_LE(std::abs(rd - 2 * e * s / (e + s)), 1e-12);
    }
    ASSERT_GE(rd, std::min(e, s) - 1e-15);
    ASSERT_LE(rd, std::max(e, s) + 1e-15);
    ASSERT_EQ(rd == 0.0, e == 0.0 || s == 0.0);
  }
}

// Hand-built databases. Counts are one below a power of two so that every
// normalized log frequency is an exact ratio of exponents (f_max + 1 = 16).
PatternDatabase HandCore() {
  PatternDatabase db(PatternKind::kCore);
  db.Add("i_nsubj|dobj", 15);             // 1
  db.Add("i_nsubjpass|agent|pobj", 7);    // 3/4
  db.Add("i_nsubj|attr|prep|pobj", 3);    // 1/2
  return db;
}

PatternDatabase HandSub() {
  PatternDatabase db(PatternKind::kSub);
  db.Add("punct", 15);        // 1
  db.Add("det", 7);           // 3/4
  db.Add("amod", 3);          // 1/2
  db.Add("amod|advmod", 1);   // 1/4
  return db;
}

TEST(ScoreCandidate, HandTracedSentenceOne) {
  // Alice likes the red apple .   core: Alice likes apple (3 x 1)
  //   the [det] 3/4, red [amod] 1/2, . [punct] 1
  //   exp = 1, sig = 5.25 / 6 = 7/8, rd = 2 * 7/8 / (15/8) = 14/15
  const auto c = MakeCandidate(MakeTokens({{"Alice", 2, "nsubj"}, {"likes", 0, "ROOT"},
                                           {"the", 5, "det"}, {"red", 5, "amod"},
                                           {"apple", 2, "dobj"}, {".", 2, "punct"}}),
                               {1, 1, "Alice"}, {5, 5, "Apple"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, HandCore(), HandSub(), Modifying());
  EXPECT_NEAR(s.exp, 1.0, kTol);
  EXPECT_NEAR(s.sig, 7.0 / 8.0, kTol);
  EXPECT_NEAR(s.rd, 14.0 / 15.0, kTol);
  const std::vector<double> want = {1, 1, 0.75, 0.5, 1, 1};
  ASSERT_EQ(s.token_weights.size(), want.size());
  for (size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(s.token_weights[i], want[i], kTol);
}

TEST(ScoreCandidate, HandTracedSentenceTwo) {
  // Bob is a member of Club .   core: Bob is member of Club (5 x 1)
  //   a [det] 3/4, . [punct] 1
  //   exp = 1/2, sig = 6.75 / 7 = 27/28, rd = (27/28) / (41/28) = 27/41
  const auto c = MakeCandidate(MakeTokens({{"Bob", 2, "nsubj"}, {"is", 0, "ROOT"}, {"a", 4, "det"},
                                           {"member", 2, "attr"}, {"of", 4, "prep"},
                                           {"Club", 5, "pobj"}, {".", 2, "punct"}}),
                               {1, 1, "Bob"}, {6, 6, "Club"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, HandCore(), HandSub(), Modifying());
  EXPECT_NEAR(s.exp, 0.5, kTol);
  EXPECT_NEAR(s.sig, 27.0 / 28.0, kTol);
  EXPECT_NEAR(s.rd, 27.0 / 41.0, kTol);
}

TEST(ScoreCandidate, HandTracedSentenceThree) {
  // Carol was hired by Dave but very happy   (happy: amod of Dave)
  //   core: Carol hired by Dave (4 x 1); was [auxpass] unseen -> 0;
  //   but [cc] irrelevant -> 0; happy [amod] 1/2; very [amod|advmod] 1/4
  //   exp = 3/4, sig = 4.75 / 8 = 19/32,
  //   rd = 2 * (3/4)(19/32) / (43/32) = 57/86
  const auto c = MakeCandidate(
      MakeTokens({{"Carol", 3, "nsubjpass"}, {"was", 3, "auxpass"}, {"hired", 0, "ROOT"},
                  {"by", 3, "agent"}, {"Dave", 4, "pobj"}, {"but", 3, "cc"},
                  {"very", 8, "advmod"}, {"happy", 5, "amod"}}),
      {1, 1, "Carol"}, {5, 5, "Dave"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, HandCore(), HandSub(), Modifying());
  EXPECT_NEAR(s.exp, 0.75, kTol);
  EXPECT_NEAR(s.sig, 19.0 / 32.0, kTol);
  EXPECT_NEAR(s.rd, 57.0 / 86.0, kTol);
  EXPECT_NEAR(s.token_weights[6], 0.25, kTol);
  EXPECT_NEAR(s.token_weights[7], 0.5, kTol);
}

TEST(ScoreCandidate, AllAtMaximumIsOne) {
  PatternDatabase core(PatternKind::kCore), sub(PatternKind::kSub);
  core.Add("i_nsubj|dobj", 4);
  sub.Add("punct", 9);
  const auto c = MakeCandidate(MakeTokens({{"A", 2, "nsubj"}, {"likes", 0, "ROOT"},
                                           {"B", 2, "dobj"}, {".", 2, "punct"}, {".", 2, "punct"}}),
                               {1, 1, "A"}, {3, 3, "B"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, core, sub, Modifying());
  EXPECT_EQ(s.exp, 1.0);
  EXPECT_EQ(s.sig, 1.0);
  EXPECT_EQ(s.rd, 1.0);
}

TEST(ScoreCandidate, UnseenCorePatternScoresZero) {
  const auto c = MakeCandidate(MakeTokens({{"A", 2, "nsubj"}, {"sees", 0, "ROOT"},
                                           {"B", 2, "iobj"}, {".", 2, "punct"}, {".", 2, "punct"}}),
                               {1, 1, "A"}, {3, 3, "B"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, HandCore(), HandSub(), Modifying());
  EXPECT_EQ(s.exp, 0.0);
  EXPECT_GT(s.sig, 0.0);
  EXPECT_EQ(s.rd, 0.0);
}

TEST(ScoreCandidate, EmptyDatabasesDegradeToZero) {
  const auto c = MakeCandidate(MakeTokens({{"A", 2, "nsubj"}, {"likes", 0, "ROOT"},
                                           {"B", 2, "dobj"}, {".", 2, "punct"}, {".", 2, "punct"}}),
                               {1, 1, "A"}, {3, 3, "B"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, PatternDatabase(PatternKind::kCore),
                                           PatternDatabase(PatternKind::kSub), Modifying());
  EXPECT_EQ(s.rd, 0.0);
  EXPECT_NEAR(s.sig, 0.6, kTol);
}

TEST(ScoreCandidate, ScoresStayInUnitInterval) {
  std::mt19937 rng(53);
  const auto candidates = testing::RandomCandidates(rng, 400);
  PatternDatabase core(PatternKind::kCore), sub(PatternKind::kSub);
  for (const auto &c : candidates) Accumulate(&core, &sub, c, 0.3, Modifying());
  for (const auto &c : candidates) {
    const ScoredCandidate s = ScoreCandidate(c, core, sub, Modifying());
    for (double v : {s.exp, s.sig, s.rd}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    ASSERT_EQ(s.token_weights.size(), c.tokens.size());
    ASSERT_EQ(s.rd == 0.0, s.exp == 0.0 || s.sig == 0.0);
  }
}

TEST(ScoredJson, SixDigitScoresRoundTrip) {
  const auto c = MakeCandidate(MakeTokens({{"Bob", 2, "nsubj"}, {"is", 0, "ROOT"}, {"a", 4, "det"},
                                           {"member", 2, "attr"}, {"of", 4, "prep"},
                                           {"Club", 5, "pobj"}, {".", 2, "punct"}}),
                               {1, 1, "Bob"}, {6, 6, "Club"}, 0.9);
  const ScoredCandidate s = ScoreCandidate(c, HandCore(), HandSub(), Modifying());
  const std::string line = ScoredToJsonLine(s);
  EXPECT_NE(line.find("\"exp\":0.500000,\"sig\":0.964286,\"rd\":0.658537,\"weights\":[1.000000"),
            std::string::npos)
      << line;
  const ScoredCandidate back = ScoredFromJson(nlohmann::json::parse(line));
  EXPECT_EQ(back.rd, 0.658537);
  EXPECT_EQ(ScoredToJsonLine(back), line);
}

}  // namespace
}  // namespace dkg
