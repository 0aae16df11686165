// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iontrap/errors.hpp"

#include <cstdio>

namespace iontrap {

void TruncationGuard::check(double tail_population, const std::string &where) const {
  if (!(tail_population > eps)) return;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", tail_population);
  std::string msg = where + ": population " + buf + " in the top Fock levels exceeds the truncation guard";
  if (strict) throw TruncationError(msg);
  if (warnings) warnings->push_back("TruncationWarning: " + msg);
}

}  // namespace iontrap
