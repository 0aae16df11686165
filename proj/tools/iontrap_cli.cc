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

// Command-line front end. Talks to the library only through iontrap.h.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iontrap/iontrap.h"

namespace {

int exit_code(iontrap_status s) {
  switch (s) {
    case IONTRAP_OK: return 0;
    case IONTRAP_ERR_ARGUMENT:
    case IONTRAP_ERR_CONFIG: return 2;
    case IONTRAP_ERR_PHYSICS: return 3;
    case IONTRAP_ERR_IO: return 4;
    default: return 5;
  }
}

int report_error(iontrap_status s) {
  std::cerr << "error";
  std::string name = iontrap_last_error_name();
  if (!name.empty()) std::cerr << " [" << name << "]";
  std::cerr << ": " << iontrap_last_error() << "\n";
  return exit_code(s);
}

int cmd_list(bool json) {
  size_t n = iontrap_scenario_count();
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (size_t i = 0; i < n; ++i) {
      const char *kind = "", *desc = "";
      iontrap_scenario_info(i, &kind, &desc);
      arr.push_back({{"name", iontrap_scenario_name(i)}, {"kind", kind}, {"description", desc}});
    }
    std::cout << nlohmann::json{{"version", iontrap_version()}, {"scenarios", arr}}.dump(2) << "\n";
    return 0;
  }
  for (size_t i = 0; i < n; ++i) {
    const char *kind = "", *desc = "";
    iontrap_scenario_info(i, &kind, &desc);
    std::printf("%-28s %-11s %s\n", iontrap_scenario_name(i), kind, desc);
  }
  return 0;
}

int cmd_run(const std::string &target, bool has_seed, unsigned long long seed, bool strict, const std::string &out,
            bool quiet) {
  iontrap_run_options opt{};
  opt.has_seed = has_seed ? 1 : 0;
  opt.seed = seed;
  opt.strict = strict ? 1 : 0;
  opt.out_dir = out.c_str();
  iontrap_run *run = nullptr;
  std::error_code ec;
  // Anything that looks like a path is read from disk; otherwise it names a
  // bundled scenario.
  bool is_path = std::filesystem::is_regular_file(target, ec) || target.find('/') != std::string::npos ||
                 std::filesystem::path(target).extension() == ".cfg";
  iontrap_status s = is_path ? iontrap_run_file(target.c_str(), &opt, &run)
                             : iontrap_run_bundled(target.c_str(), &opt, &run);
  if (s != IONTRAP_OK) return report_error(s);
  if (!quiet) {
    std::printf("scenario %s\n", iontrap_run_name(run));
    for (size_t i = 0; i < iontrap_run_metric_count(run); ++i) {
      const char *name;
      double v;
      iontrap_run_metric(run, i, &name, &v);
      std::printf("  %-28s %.10g\n", name, v);
    }
    for (size_t i = 0; i < iontrap_run_warning_count(run); ++i) std::printf("  warning: %s\n", iontrap_run_warning(run, i));
    for (size_t i = 0; i < iontrap_run_expectation_count(run); ++i) {
      const char *text;
      double v;
      int ok;
      iontrap_run_expectation(run, i, &text, &v, &ok);
      std::printf("  %s  %s  (value %.10g)\n", ok ? "PASS" : "FAIL", text, v);
    }
    if (!out.empty())
      for (size_t i = 0; i < iontrap_run_output_file_count(run); ++i)
        std::printf("  wrote %s/%s\n", out.c_str(), iontrap_run_output_file(run, i));
  }
  int rc = iontrap_run_passed(run) ? 0 : 1;
  iontrap_run_free(run);
  return rc;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Trapped-ion simulation and error-budget runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(iontrap_version()));

  bool json = false;
  auto *list = app.add_subcommand("list", "List bundled scenarios");
  list->add_flag("--json", json, "Machine-readable listing");

  std::string target, out = "iontrap-out";
  unsigned long long seed = 0;
  bool strict = false, quiet = false;
  auto *run = app.add_subcommand("run", "Run a config file or a bundled scenario");
  run->add_option("config", target, "Path to a .cfg file or a bundled scenario name")->required();
  auto *seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_flag("--strict", strict, "Treat truncation warnings as errors");
  run->add_option("--out", out, "Output directory (empty string: write nothing)");
  run->add_flag("-q,--quiet", quiet, "Only set the exit code");

  auto *kinds = app.add_subcommand("kinds", "List experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*list) return cmd_list(json);
  if (*kinds) {
    for (size_t i = 0; i < iontrap_kind_count(); ++i) std::printf("%s\n", iontrap_kind_name(i));
    return 0;
  }
  return cmd_run(target, seed_opt->count() > 0, seed, strict, out, quiet);
}
