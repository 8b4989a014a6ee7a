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

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "dkg/error.hpp"

namespace dkg {

inline constexpr std::string_view kInversePrefix = "i_";

// Sequence of dependency labels along a path. Inverse (upward) steps carry
// the "i_" prefix. Serialized as labels joined with "|".
struct RelationPattern {
  std::vector<std::string> labels;

  bool empty() const { return labels.empty(); }
  size_t size() const { return labels.size(); }

  std::string ToString() const { return Join(labels, "|"); }

  static RelationPattern Parse(std::string_view text) {
    RelationPattern pattern;
    if (text.empty()) return pattern;
    pattern.labels = Split(text, '|');
    return pattern;
  }

  bool IsPrefixOf(const RelationPattern &other) const {
    if (labels.size() > other.labels.size()) return false;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != other.labels[i]) return false;
    }
    return true;
  }

  auto operator<=>(const RelationPattern &) const = default;
  bool operator==(const RelationPattern &) const = default;
};

inline std::string PatternElement(std::string_view deprel, bool inverse) {
  std::string element;
  if (inverse) element.append(kInversePrefix);
  element.append(deprel);
  return element;
}

}  // namespace dkg
