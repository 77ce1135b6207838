// Copyright 2026 The synthsel Authors.
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

#include <array>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthsel/query.hpp"

namespace synthsel {

/// Operators whose occurrences in the constraints are counted.
inline constexpr std::array<std::string_view, 22> kFeatureKeywords = {
    "+",   "-",  "*",  "div", "mod", "ite", "and",   "or",    "not",   "=",     ">=",
    "<=",  ">",  "<",  "=>",  "bvadd", "bvsub", "bvand", "bvor", "bvnot", "bvxor", "bvult"};

enum class LogicCategory { BV, LIA, NIA, PBE, INV, General };

inline constexpr std::array<std::string_view, 6> kLogicCategories = {"BV",  "LIA", "NIA",
                                                                     "PBE", "INV", "GENERAL"};

/// Layout: keyword counts, query length, literal counts (Int, Bool, BitVec),
/// logic one-hot.
struct FeatureVector {
  static constexpr std::size_t kKeywordOffset = 0;
  static constexpr std::size_t kLengthOffset = kFeatureKeywords.size();
  static constexpr std::size_t kConstantOffset = kLengthOffset + 1;
  static constexpr std::size_t kLogicOffset = kConstantOffset + 3;
  static constexpr std::size_t kDimension = kLogicOffset + kLogicCategories.size();

  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureConfig {
  /// Divide keyword counts by the query length.
  bool normalize_by_length = false;
};

LogicCategory classify_logic(const SynthQuery& query);

FeatureVector featurize(const SynthQuery& query, const FeatureConfig& config = {});

/// Euclidean distance. Throws Error when the dimensions differ.
double distance(const FeatureVector& a, const FeatureVector& b);

/// Human-readable name of each coordinate.
std::vector<std::string> feature_names();

void to_json(nlohmann::json& j, const FeatureVector& f);
void from_json(const nlohmann::json& j, FeatureVector& f);

}  // namespace synthsel
