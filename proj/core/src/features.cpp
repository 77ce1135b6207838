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

#include "synthsel/features.hpp"

#include <algorithm>
#include <cmath>

#include "synthsel/error.hpp"

namespace synthsel {

namespace {

std::string_view keyword_of(const Term& t) {
  if (t.kind() == TermKind::Ite) return "ite";
  if (t.kind() == TermKind::App) return op_symbol(t.op());
  return {};
}

void count(const Term& t, FeatureVector& f) {
  const std::string_view kw = keyword_of(t);
  if (!kw.empty()) {
    const auto it = std::find(kFeatureKeywords.begin(), kFeatureKeywords.end(), kw);
    if (it != kFeatureKeywords.end()) {
      f.values[FeatureVector::kKeywordOffset +
               static_cast<std::size_t>(it - kFeatureKeywords.begin())] += 1;
    }
  }
  switch (t.kind()) {
    case TermKind::IntLit:
      f.values[FeatureVector::kConstantOffset] += 1;
      break;
    case TermKind::BoolLit:
      f.values[FeatureVector::kConstantOffset + 1] += 1;
      break;
    case TermKind::BvLit:
      f.values[FeatureVector::kConstantOffset + 2] += 1;
      break;
    default:
      break;
  }
  for (const auto& c : t.children()) count(c, f);
}

bool is_ground_call(const Term& t, std::string_view fun) {
  if (t.kind() != TermKind::Call || t.name() != fun) return false;
  return std::all_of(t.children().begin(), t.children().end(),
                     [](const Term& c) { return c.is_literal(); });
}

// (= (f lit ...) lit) in either orientation.
bool is_example(const Term& t, std::string_view fun) {
  if (t.kind() != TermKind::App || t.op() != Op::Eq || t.children().size() != 2) return false;
  const Term& a = t.child(0);
  const Term& b = t.child(1);
  return (is_ground_call(a, fun) && b.is_literal()) || (is_ground_call(b, fun) && a.is_literal());
}

}  // namespace

LogicCategory classify_logic(const SynthQuery& query) {
  if (query.from_invariant) return LogicCategory::INV;
  if (!query.constraints.empty() &&
      std::all_of(query.constraints.begin(), query.constraints.end(),
                  [&](const Term& c) { return is_example(c, query.fun.name); })) {
    return LogicCategory::PBE;
  }
  switch (logic_family(query.logic)) {
    case LogicFamily::LIA:
      return LogicCategory::LIA;
    case LogicFamily::NIA:
      return LogicCategory::NIA;
    case LogicFamily::BV:
      return LogicCategory::BV;
    case LogicFamily::Other:
      break;
  }
  return LogicCategory::General;
}

FeatureVector featurize(const SynthQuery& query, const FeatureConfig& config) {
  FeatureVector f;
  f.values.assign(FeatureVector::kDimension, 0.0);
  for (const auto& c : query.constraints) count(c, f);
  const double length = static_cast<double>(query.source_tokens);
  f.values[FeatureVector::kLengthOffset] = length;
  if (config.normalize_by_length && length > 0) {
    for (std::size_t i = 0; i < kFeatureKeywords.size(); ++i) {
      f.values[FeatureVector::kKeywordOffset + i] /= length;
    }
  }
  f.values[FeatureVector::kLogicOffset + static_cast<std::size_t>(classify_logic(query))] = 1;
  return f;
}

double distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw Error("feature dimension mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  }
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  for (auto kw : kFeatureKeywords) names.push_back("kw:" + std::string(kw));
  names.emplace_back("length");
  names.emplace_back("const:Int");
  names.emplace_back("const:Bool");
  names.emplace_back("const:BitVec");
  for (auto l : kLogicCategories) names.push_back("logic:" + std::string(l));
  return names;
}

void to_json(nlohmann::json& j, const FeatureVector& f) { j = f.values; }

void from_json(const nlohmann::json& j, FeatureVector& f) {
  f.values = j.get<std::vector<double>>();
}

}  // namespace synthsel
