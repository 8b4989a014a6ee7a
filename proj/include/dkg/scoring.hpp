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

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dkg/corpus.hpp"
#include "dkg/dependency.hpp"
#include "dkg/pattern_db.hpp"

namespace dkg {

// Normalized log frequency log(f + 1) / log(f_max + 1); 0 when f_max = 0.
inline double NormalizedLogFrequency(uint64_t f, uint64_t f_max) {
  if (f_max == 0) return 0.0;
  return std::log1p(static_cast<double>(f)) / std::log1p(static_cast<double>(f_max));
}

// Explicitness of a core relation pattern.
inline double ExpScore(const RelationPattern &pattern, const PatternDatabase &core_db) {
  return NormalizedLogFrequency(core_db.Frequency(pattern), core_db.MaxFrequency());
}

inline double TokenWeight(const TokenCategory &category, const PatternDatabase &sub_db) {
  switch (category.kind) {
    case TokenCategory::Kind::kCore: return 1.0;
    case TokenCategory::Kind::kModifying:
      return NormalizedLogFrequency(sub_db.Frequency(category.pattern), sub_db.MaxFrequency());
    case TokenCategory::Kind::kIrrelevant: return 0.0;
  }
  return 0.0;
}

// Mean token weight over all |s| tokens.
inline double SigScore(const std::vector<double> &weights, size_t sentence_length) {
  if (sentence_length == 0) return 0.0;
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum / static_cast<double>(sentence_length);
}

// Harmonic mean of explicitness and significance.
inline double RdScore(double exp, double sig) {
  if (exp + sig <= 0.0) return 0.0;
  return 2.0 * exp * sig / (exp + sig);
}

struct ScoredCandidate {
  CandidateDescription candidate;
  double exp = 0.0;
  double sig = 0.0;
  double rd = 0.0;
  std::vector<double> token_weights;
};

inline ScoredCandidate ScoreCandidate(const CandidateDescription &c,
                                      const PatternDatabase &core_db,
                                      const PatternDatabase &sub_db,
                                      const std::set<std::string> &modifying) {
  const CandidateAnalysis a = Analyze(c, modifying);
  ScoredCandidate out;
  out.candidate = c;
  out.token_weights.reserve(a.categories.size());
  for (const TokenCategory &cat : a.categories) {
    out.token_weights.push_back(TokenWeight(cat, sub_db));
  }
  out.exp = ExpScore(a.core.pattern, core_db);
  out.sig = SigScore(out.token_weights, c.tokens.size());
  out.rd = RdScore(out.exp, out.sig);
  return out;
}

// Scores are written with six fractional digits, so the serialized line is
// built by hand after the candidate fields.
inline std::string ScoredToJsonLine(const ScoredCandidate &s) {
  std::string line = CandidateToJson(s.candidate).dump();
  line.pop_back();  // closing brace
  line += ",\"exp\":" + FormatFixed(s.exp);
  line += ",\"sig\":" + FormatFixed(s.sig);
  line += ",\"rd\":" + FormatFixed(s.rd);
  line += ",\"weights\":[";
  for (size_t i = 0; i < s.token_weights.size(); ++i) {
    if (i > 0) line += ',';
    line += FormatFixed(s.token_weights[i]);
  }
  line += "]}";
  return line;
}

inline ScoredCandidate ScoredFromJson(const nlohmann::json &j) {
  ScoredCandidate s;
  s.candidate = CandidateFromJson(j);
  s.exp = j.at("exp").get<double>();
  s.sig = j.at("sig").get<double>();
  s.rd = j.at("rd").get<double>();
  s.token_weights = j.at("weights").get<std::vector<double>>();
  return s;
}

}  // namespace dkg
