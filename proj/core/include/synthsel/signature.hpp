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

#include <string>
#include <string_view>
#include <vector>

#include "synthsel/term.hpp"

namespace synthsel {

struct Param {
  std::string name;
  Sort sort;

  bool operator==(const Param&) const = default;
};

/// Signature of the function to synthesize.
struct SynthFun {
  std::string name;
  std::vector<Param> params;
  Sort result = Sort::integer();

  bool operator==(const SynthFun&) const = default;
};

enum class LogicFamily { LIA, NIA, BV, Other };

/// Maps a set-logic tag to its theory family; a leading `QF_` is ignored.
LogicFamily logic_family(std::string_view logic);

}  // namespace synthsel
