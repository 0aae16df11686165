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

#ifndef IONTRAP_SRC_RUNNER_HPP
#define IONTRAP_SRC_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace iontrap {

struct Expectation {
  std::string text;  // as written in the config
  double value = 0;  // metric value
  bool passed = false;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string out_dir;      // empty: nothing written
};

struct RunResult {
  std::string name, kind, variant, description;
  std::uint64_t seed = 0;
  std::vector<Table> tables;  // tables[0] is the main table
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Expectation> expectations;
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  bool passed() const;
  double metric(const std::string &name) const;  // NaN if absent
};

/// Runs one experiment config. Throws ConfigError or a PhysicsError subclass.
RunResult run_experiment(const Config &cfg, const std::string &name, const RunOptions &opt);

/// Evaluates "metric op value" or "metric ~ value +- tol[%]" against metrics.
Expectation evaluate_expectation(const std::string &line, const RunResult &r, const std::string &key_path);

/// Manifest text listing inputs, version, metrics and expectations.
std::string manifest_text(const RunResult &r, const std::string &origin);

std::vector<std::string> experiment_kinds();

struct BundledScenario {
  const char *name;
  const char *text;
};

const std::vector<BundledScenario> &bundled_scenarios();

}  // namespace iontrap

#endif
