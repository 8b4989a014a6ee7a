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
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dkg/dependency.hpp"
#include "dkg/embeddings.hpp"
#include "dkg/error.hpp"

namespace dkg {

// Inclusive 1-based token range attributed to an entity.
struct MentionSpan {
  int start = 0;
  int end = 0;
  std::string entity;

  bool Overlaps(const MentionSpan &o) const { return start <= o.end && o.start <= end; }
  bool operator==(const MentionSpan &) const = default;
};

struct Hyperlink {
  int start = 0;
  int end = 0;
  std::string target;
};

struct ParsedSentence {
  std::string doc_id;
  int sent_idx = 0;
  std::vector<Token> tokens;
  std::vector<MentionSpan> mentions;
  std::vector<Hyperlink> links;

  std::string Text() const {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += tokens[i].text;
    }
    return out;
  }
};

struct Document {
  std::string doc_id;
  std::string title;
  std::vector<ParsedSentence> sentences;
};

// Counters keyed by name; std::map keeps report order stable.
struct Counters {
  std::map<std::string, uint64_t> counts;

  void Add(const std::string &key, uint64_t n = 1) { counts[key] += n; }
  uint64_t Get(const std::string &key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
  void Merge(const Counters &o) {
    for (const auto &[k, v] : o.counts) counts[k] += v;
  }
};

// ---------------------------------------------------------------------------
// Corpus input

inline Document ParseDocument(const std::string &line, const std::string &file,
                              size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw MalformedLine(file, line_no, std::string("invalid JSON: ") + e.what());
  }
  try {
    Document doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.title = j.at("title").get<std::string>();
    int sent_idx = 0;
    for (const auto &js : j.at("sentences")) {
      ParsedSentence s;
      s.doc_id = doc.doc_id;
      s.sent_idx = sent_idx++;
      for (const auto &jt : js.at("tokens")) {
        s.tokens.push_back({jt.at("i").get<int>(), jt.at("text").get<std::string>(),
                            jt.at("head").get<int>(), jt.at("deprel").get<std::string>()});
      }
      if (js.contains("links")) {
        for (const auto &jl : js.at("links")) {
          s.links.push_back({jl.at("start").get<int>(), jl.at("end").get<int>(),
                             jl.at("target").get<std::string>()});
        }
      }
      doc.sentences.push_back(std::move(s));
    }
    return doc;
  } catch (const nlohmann::json::exception &e) {
    throw MalformedLine(file, line_no, std::string("bad document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Mentions and hyperlink correction

// Surface mention for an entity title: parenthesised content and everything
// after the first comma removed. nullopt if nothing usable remains.
inline std::optional<std::string> CraftMention(std::string_view title) {
  std::string out;
  int depth = 0;
  for (char c : title) {
    if (c == ',' && depth == 0) break;
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out += c;
    }
  }
  // Collapse the whitespace left behind by removed content.
  std::string collapsed;
  bool pending_space = false;
  for (char c : out) {
    if (c == ' ' || c == '\t') {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed += ' ';
    pending_space = false;
    collapsed += c;
  }
  if (collapsed.empty()) return std::nullopt;
  return collapsed;
}

inline std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Set of known entity titles with a case-insensitive side index.
class TitleIndex {
 public:
  TitleIndex() = default;
  explicit TitleIndex(const std::vector<std::string> &titles) {
    for (const auto &t : titles) Add(t);
  }

  void Add(const std::string &title) {
    if (!exact_.insert(title).second) return;
    folded_[AsciiLower(title)].insert(title);
    if (std::optional<std::string> mention = CraftMention(title)) {
      by_mention_[AsciiLower(*mention)].insert(title);
    }
  }

  bool Contains(const std::string &title) const { return exact_.count(title) > 0; }

  // Titles equal to `raw` under ASCII case folding, sorted.
  std::vector<std::string> CaseInsensitiveMatches(const std::string &raw) const {
    auto it = folded_.find(AsciiLower(raw));
    if (it == folded_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  // Titles whose crafted mention equals `raw` under ASCII case folding, so
  // that "mercury" reaches both "Mercury (planet)" and "Mercury (element)".
  std::vector<std::string> MentionMatches(const std::string &raw) const {
    auto it = by_mention_.find(AsciiLower(raw));
    if (it == by_mention_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  size_t size() const { return exact_.size(); }

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_map<std::string, std::set<std::string>> folded_;
  std::unordered_map<std::string, std::set<std::string>> by_mention_;
};

struct LinkCorrection {
  enum class Outcome { kExact, kCaseFolded, kDisambiguated, kDangling, kNoEmbedding };

  Outcome outcome = Outcome::kDangling;
  std::string entity;

  bool ok() const {
    return outcome == Outcome::kExact || outcome == Outcome::kCaseFolded ||
           outcome == Outcome::kDisambiguated;
  }
};

// Maps a raw hyperlink target onto a known title: exact match, else
// case-insensitive title match, else case-insensitive match on the crafted
// mention. Several matches are resolved by embedding similarity to the page
// entity; ties go to the lexicographically smallest title.
inline LinkCorrection CorrectLink(const std::string &raw, const TitleIndex &titles,
                                  const EmbeddingStore &embeddings,
                                  const std::string &page_title) {
  using Outcome = LinkCorrection::Outcome;
  if (titles.Contains(raw)) return {Outcome::kExact, raw};
  std::vector<std::string> matches = titles.CaseInsensitiveMatches(raw);
  if (matches.empty()) matches = titles.MentionMatches(raw);
  if (matches.empty()) return {Outcome::kDangling, {}};
  if (matches.size() == 1) return {Outcome::kCaseFolded, matches.front()};
  std::optional<double> best_score;
  std::string best;
  for (const std::string &m : matches) {
    std::optional<double> score = embeddings.Relevance(m, page_title);
    if (!score) continue;
    if (!best_score || *score > *best_score) {
      best_score = score;
      best = m;
    }
  }
  if (!best_score) return {Outcome::kNoEmbedding, {}};
  return {Outcome::kDisambiguated, best};
}

// Per-document mention -> entity dictionary, updated as links are seen.
class LocalDictionary {
 public:
  // Newest link wins when a mention string is already mapped.
  void Update(const std::string &mention, const std::string &entity) {
    auto [it, inserted] = entries_.insert_or_assign(mention, entity);
    if (inserted) {
      std::vector<std::string> words = Split(mention, ' ');
      by_first_word_[words.front()].push_back({mention, std::move(words)});
    }
  }

  const std::string *Lookup(const std::string &mention) const {
    auto it = entries_.find(mention);
    return it == entries_.end() ? nullptr : &it->second;
  }

  size_t size() const { return entries_.size(); }

  // All whole-token, case-sensitive occurrences of dictionary mentions,
  // ordered by (start, end, entity).
  std::vector<MentionSpan> Match(const std::vector<Token> &tokens) const {
    std::vector<MentionSpan> spans;
    const int n = static_cast<int>(tokens.size());
    for (int i = 0; i < n; ++i) {
      auto it = by_first_word_.find(tokens[i].text);
      if (it == by_first_word_.end()) continue;
      for (const Entry &e : it->second) {
        const int len = static_cast<int>(e.words.size());
        if (i + len > n) continue;
        bool ok = true;
        for (int k = 1; k < len && ok; ++k) ok = tokens[i + k].text == e.words[k];
        if (ok) spans.push_back({i + 1, i + len, entries_.at(e.mention)});
      }
    }
    std::sort(spans.begin(), spans.end(), [](const MentionSpan &a, const MentionSpan &b) {
      return std::tie(a.start, a.end, a.entity) < std::tie(b.start, b.end, b.entity);
    });
    return spans;
  }

 private:
  struct Entry {
    std::string mention;
    std::vector<std::string> words;
  };

  std::unordered_map<std::string, std::string> entries_;
  std::unordered_map<std::string, std::vector<Entry>> by_first_word_;
};

// One pass over a document in order. Each sentence's links update the
// dictionary before the sentence itself is matched; earlier sentences never
// see later links. Fills `mentions` on the returned sentences.
inline std::vector<ParsedSentence> ScanDocument(const Document &doc,
                                                const TitleIndex &titles,
                                                const EmbeddingStore &embeddings,
                                                Counters *stats) {
  LocalDictionary dict;
  std::vector<ParsedSentence> out;
  out.reserve(doc.sentences.size());
  for (const ParsedSentence &sentence : doc.sentences) {
    for (const Hyperlink &link : sentence.links) {
      stats->Add("links_total");
      LinkCorrection fix = CorrectLink(link.target, titles, embeddings, doc.title);
      switch (fix.outcome) {
        case LinkCorrection::Outcome::kDangling: stats->Add("links_skipped_dangling"); continue;
        case LinkCorrection::Outcome::kNoEmbedding: stats->Add("links_skipped_no_embedding"); continue;
        case LinkCorrection::Outcome::kCaseFolded: stats->Add("links_case_corrected"); break;
        case LinkCorrection::Outcome::kDisambiguated: stats->Add("links_disambiguated"); break;
        case LinkCorrection::Outcome::kExact: break;
      }
      std::optional<std::string> mention = CraftMention(fix.entity);
      if (!mention) {
        stats->Add("links_skipped_unusable_title");
        continue;
      }
      dict.Update(*mention, fix.entity);
    }
    ParsedSentence scanned = sentence;
    scanned.mentions = dict.Match(sentence.tokens);
    out.push_back(std::move(scanned));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

// False when compound arcs (in either direction, followed recursively) reach
// tokens outside the span: the mention is part of a bigger noun phrase.
inline bool CompoundComplete(const DependencyTree &tree, const MentionSpan &span) {
  std::vector<bool> in_phrase(tree.size() + 1, false);
  std::vector<int> stack;
  for (int i = span.start; i <= span.end; ++i) {
    in_phrase[i] = true;
    stack.push_back(i);
  }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    auto visit = [&](int v) {
      if (!in_phrase[v]) {
        in_phrase[v] = true;
        stack.push_back(v);
      }
    };
    if (tree.head(u) != 0 && tree.deprel(u) == "compound") visit(tree.head(u));
    for (int c : tree.children(u)) {
      if (tree.deprel(c) == "compound") visit(c);
    }
  }
  for (int i = 1; i <= tree.size(); ++i) {
    if (in_phrase[i] && (i < span.start || i > span.end)) return false;
  }
  return true;
}

struct CandidateDescription {
  std::string entity_a;  // entity_a < entity_b
  std::string entity_b;
  std::string doc_id;
  int sent_idx = 0;
  std::string sentence_text;
  std::vector<Token> tokens;
  MentionSpan span_a;
  MentionSpan span_b;
  DependencyPath core_path;  // from the head of span_a to the head of span_b
  std::optional<double> relevance;
};

enum class RejectReason {
  kTooShort,
  kTooLong,
  kIncompleteNounPhrase,
  kNonSubjectPattern,
};

inline const char *RejectReasonName(RejectReason r) {
  switch (r) {
    case RejectReason::kTooShort: return "too_short";
    case RejectReason::kTooLong: return "too_long";
    case RejectReason::kIncompleteNounPhrase: return "incomplete_noun_phrase";
    case RejectReason::kNonSubjectPattern: return "non_subject_pattern";
  }
  return "unknown";
}

inline constexpr int kMinSentenceTokens = 5;
inline constexpr int kMaxSentenceTokens = 50;

// nullopt accepts the candidate.
inline std::optional<RejectReason> FilterCandidate(const CandidateDescription &c,
                                                   const DependencyTree &tree) {
  const int n = static_cast<int>(c.tokens.size());
  if (n < kMinSentenceTokens) return RejectReason::kTooShort;
  if (n > kMaxSentenceTokens) return RejectReason::kTooLong;
  if (!CompoundComplete(tree, c.span_a) || !CompoundComplete(tree, c.span_b)) {
    return RejectReason::kIncompleteNounPhrase;
  }
  if (!NormalizeSubjectFirst(c.core_path).subject_first) {
    return RejectReason::kNonSubjectPattern;
  }
  return std::nullopt;
}

inline std::optional<RejectReason> FilterCandidate(const CandidateDescription &c) {
  return FilterCandidate(c, DependencyTree(c.tokens));
}

inline int SpanGap(const MentionSpan &a, const MentionSpan &b) {
  return a.end < b.start ? b.start - a.end : a.start - b.end;
}

// Closest non-overlapping span pair for two entities, leftmost on ties.
inline std::optional<std::pair<MentionSpan, MentionSpan>> ClosestSpanPair(
    const std::vector<MentionSpan> &spans_a, const std::vector<MentionSpan> &spans_b) {
  std::optional<std::pair<MentionSpan, MentionSpan>> best;
  auto key = [](const MentionSpan &a, const MentionSpan &b) {
    return std::make_tuple(SpanGap(a, b), std::min(a.start, b.start), a.start);
  };
  for (const MentionSpan &a : spans_a) {
    for (const MentionSpan &b : spans_b) {
      if (a.Overlaps(b)) continue;
      if (!best || key(a, b) < key(best->first, best->second)) best = {a, b};
    }
  }
  return best;
}

// Candidate records for every pair of distinct entities mentioned in a
// scanned sentence, filtered. Rejections are counted under their reason.
inline std::vector<CandidateDescription> SentenceCandidates(
    const ParsedSentence &sentence, const EmbeddingStore &embeddings, Counters *stats) {
  std::vector<CandidateDescription> out;
  if (sentence.mentions.empty()) return out;
  if (auto err = DependencyTree::Validate(sentence.tokens)) {
    stats->Add("sentences_invalid_tree");
    return out;
  }
  const DependencyTree tree(sentence.tokens);
  std::map<std::string, std::vector<MentionSpan>> by_entity;
  for (const MentionSpan &m : sentence.mentions) by_entity[m.entity].push_back(m);
  for (auto ia = by_entity.begin(); ia != by_entity.end(); ++ia) {
    for (auto ib = std::next(ia); ib != by_entity.end(); ++ib) {
      stats->Add("pairs_total");
      auto spans = ClosestSpanPair(ia->second, ib->second);
      if (!spans) {
        stats->Add("rejected_overlapping_mentions");
        continue;
      }
      CandidateDescription c;
      c.entity_a = ia->first;
      c.entity_b = ib->first;
      c.doc_id = sentence.doc_id;
      c.sent_idx = sentence.sent_idx;
      c.sentence_text = sentence.Text();
      c.tokens = sentence.tokens;
      c.span_a = spans->first;
      c.span_b = spans->second;
      c.core_path = CorePath(tree, MentionHead(tree, c.span_a.start, c.span_a.end),
                             MentionHead(tree, c.span_b.start, c.span_b.end));
      c.relevance = embeddings.Relevance(c.entity_a, c.entity_b);
      if (auto reason = FilterCandidate(c, tree)) {
        stats->Add(std::string("rejected_") + RejectReasonName(*reason));
        continue;
      }
      if (!c.relevance) stats->Add("accepted_relevance_miss");
      stats->Add("accepted");
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<CandidateDescription> IngestDocument(const Document &doc,
                                                        const TitleIndex &titles,
                                                        const EmbeddingStore &embeddings,
                                                        Counters *stats) {
  std::vector<CandidateDescription> out;
  for (const ParsedSentence &s : ScanDocument(doc, titles, embeddings, stats)) {
    stats->Add("sentences_total");
    for (auto &c : SentenceCandidates(s, embeddings, stats)) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Candidate JSON Lines

inline nlohmann::ordered_json CandidateToJson(const CandidateDescription &c) {
  using nlohmann::ordered_json;
  auto span = [](const MentionSpan &s) {
    return ordered_json{{"start", s.start}, {"end", s.end}, {"entity", s.entity}};
  };
  ordered_json tokens = ordered_json::array();
  for (const Token &t : c.tokens) {
    tokens.push_back({{"i", t.index}, {"text", t.text}, {"head", t.head}, {"deprel", t.deprel}});
  }
  ordered_json steps = ordered_json::array();
  for (const PathStep &s : c.core_path.steps) {
    steps.push_back({{"deprel", s.deprel}, {"inverse", s.inverse}, {"token", s.token}});
  }
  ordered_json j;
  j["entity_a"] = c.entity_a;
  j["entity_b"] = c.entity_b;
  j["doc_id"] = c.doc_id;
  j["sent_idx"] = c.sent_idx;
  j["sentence_text"] = c.sentence_text;
  j["tokens"] = std::move(tokens);
  j["span_a"] = span(c.span_a);
  j["span_b"] = span(c.span_b);
  j["core_path"] = ordered_json{{"start", c.core_path.start}, {"steps", std::move(steps)}};
  if (c.relevance) {
    j["relevance"] = *c.relevance;
  } else {
    j["relevance"] = nullptr;
  }
  return j;
}

template <typename Json>
CandidateDescription CandidateFromJson(const Json &j) {
  auto span = [](const Json &s) {
    return MentionSpan{s.at("start").template get<int>(), s.at("end").template get<int>(),
                       s.at("entity").template get<std::string>()};
  };
  CandidateDescription c;
  c.entity_a = j.at("entity_a").template get<std::string>();
  c.entity_b = j.at("entity_b").template get<std::string>();
  c.doc_id = j.at("doc_id").template get<std::string>();
  c.sent_idx = j.at("sent_idx").template get<int>();
  c.sentence_text = j.at("sentence_text").template get<std::string>();
  for (const auto &t : j.at("tokens")) {
    c.tokens.push_back({t.at("i").template get<int>(), t.at("text").template get<std::string>(),
                        t.at("head").template get<int>(),
                        t.at("deprel").template get<std::string>()});
  }
  c.span_a = span(j.at("span_a"));
  c.span_b = span(j.at("span_b"));
  c.core_path.start = j.at("core_path").at("start").template get<int>();
  for (const auto &s : j.at("core_path").at("steps")) {
    c.core_path.steps.push_back({s.at("deprel").template get<std::string>(),
                                 s.at("inverse").template get<bool>(),
                                 s.at("token").template get<int>()});
  }
  const auto &rel = j.at("relevance");
  if (!rel.is_null()) c.relevance = rel.template get<double>();
  return c;
}

}  // namespace dkg
