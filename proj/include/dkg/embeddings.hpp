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
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dkg/error.hpp"

namespace dkg {

// Entity embedding table loaded from `title<TAB>v1 v2 ... vd` rows. Read-only
// after load.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  static EmbeddingStore Load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kMissingInput, "cannot open embeddings: " + path);
    EmbeddingStore store;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (Trim(line).empty()) continue;
      size_t tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) {
        throw MalformedLine(path, line_no, "expected title<TAB>vector");
      }
      std::string title = line.substr(0, tab);
      std::vector<double> values;
      const char *p = line.c_str() + tab + 1;
      while (true) {
        while (*p == ' ') ++p;
        if (*p == '\0') break;
        char *next = nullptr;
        double v = std::strtod(p, &next);
        if (next == p || (*next != ' ' && *next != '\0')) {
          throw MalformedLine(path, line_no, "bad float in row '" + title + "'");
        }
        values.push_back(v);
        p = next;
      }
      if (values.empty()) {
        throw MalformedLine(path, line_no, "empty vector in row '" + title + "'");
      }
      if (store.dim_ != 0 && values.size() != store.dim_) {
        throw MalformedLine(path, line_no,
                            "dimension mismatch in row '" + title + "': expected " +
                                std::to_string(store.dim_) + ", got " +
                                std::to_string(values.size()));
      }
      store.Insert(std::move(title), std::move(values));
    }
    return store;
  }

  // Duplicate titles: the last insertion wins and is counted.
  void Insert(std::string title, std::vector<double> vector) {
    if (dim_ == 0) dim_ = vector.size();
    if (vector.size() != dim_) {
      throw Error(ErrorKind::kInvalidArgument, "dimension mismatch for '" + title + "'");
    }
    double sq = 0.0;
    for (double v : vector) sq += v * v;
    Row row{std::move(vector), std::sqrt(sq)};
    auto [it, inserted] = rows_.insert_or_assign(std::move(title), std::move(row));
    if (!inserted) ++duplicates_;
  }

  bool Contains(const std::string &title) const { return rows_.count(title) > 0; }
  size_t size() const { return rows_.size(); }
  size_t dim() const { return dim_; }
  size_t duplicates() const { return duplicates_; }

  const std::vector<double> *Find(const std::string &title) const {
    auto it = rows_.find(title);
    return it == rows_.end() ? nullptr : &it->second.values;
  }

  std::vector<std::string> Titles() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto &[title, row] : rows_) out.push_back(title);
    return out;
  }

  // Cosine similarity; nullopt if either title is absent or has a zero vector.
  std::optional<double> Relevance(const std::string &a, const std::string &b) const {
    auto ia = rows_.find(a);
    auto ib = rows_.find(b);
    if (ia == rows_.end() || ib == rows_.end()) return std::nullopt;
    const Row &ra = ia->second;
    const Row &rb = ib->second;
    if (ra.norm == 0.0 || rb.norm == 0.0) return std::nullopt;
    double dot = 0.0;
    for (size_t i = 0; i < dim_; ++i) dot += ra.values[i] * rb.values[i];
    double cos = dot / (ra.norm * rb.norm);
    if (cos > 1.0) cos = 1.0;
    if (cos < -1.0) cos = -1.0;
    return cos;
  }

 private:
  struct Row {
    std::vector<double> values;
    double norm = 0.0;
  };

  std::unordered_map<std::string, Row> rows_;
  size_t dim_ = 0;
  size_t duplicates_ = 0;
};

}  // namespace dkg
