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

// Writes the synthetic end-to-end corpus and its outcome matrix to a
// directory, for use with `synthsel run --matrix`.

#include <iostream>

#include "e2e_fixture.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: synthsel-make-fixture DIR\n";
    return 2;
  }
  synthsel::testing::write_e2e_fixture(synthsel::testing::make_e2e_fixture(), argv[1]);
  std::cout << "wrote " << argv[1] << "/queries and " << argv[1] << "/matrix.json\n";
  return 0;
}
