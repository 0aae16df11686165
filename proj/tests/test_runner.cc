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

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "iontrap/errors.hpp"
#include "output.hpp"
#include "runner.hpp"

using namespace iontrap;

TEST_SUITE("runner") {
  TEST_CASE("numbers round trip through their text form") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, 12345.0}) {
      std::string s = format_number(x);
      CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
  }

  TEST_CASE("CSV layout: meta lines, header, rows") {
    Table t{"demo", {"t [s]", "P"}, {}, {"seed = 1"}};
    t.add({0.5, 0.25});
    std::string csv = to_csv(t);
    CHECK(csv == "# seed = 1\nt [s],P\n0.5,0.25\n");
    CHECK(t.column("t") == 0);
    CHECK(t.column("P") == 1);
    CHECK(t.column("x") == -1);
  }

  TEST_CASE("SVG plot is well formed") {
    Table t{"demo", {"x", "y"}, {}, {}};
    for (int i = 0; i < 5; ++i) t.add({double(i), double(i * i)});
    std::string svg = to_svg(t, {"demo", "x", {"y"}, "title", false, false});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }

  TEST_CASE("expectation grammar") {
    RunResult r;
    r.metrics = {{"a", 2.0}, {"b", 105.0}};
    CHECK(evaluate_expectation("a < 3", r, "expect").passed);
    CHECK(!evaluate_expectation("a > 3", r, "expect").passed);
    CHECK(evaluate_expectation("b ~ 100 +- 5%", r, "expect").passed);
    CHECK(!evaluate_expectation("b ~ 100 +- 4", r, "expect").passed);
    CHECK_THROWS_AS(evaluate_expectation("nope < 1", r, "expect"), ConfigError);
    CHECK_THROWS_AS(evaluate_expectation("a <> 1", r, "expect"), ConfigError);
  }

  TEST_CASE("every bundled scenario runs and meets its expectations") {
    REQUIRE(bundled_scenarios().size() >= 12);
    for (const auto &s : bundled_scenarios()) {
      CAPTURE(s.name);
      RunResult r = run_experiment(Config::parse(s.text, s.name), s.name, {});
      CHECK(r.passed());
      CHECK(!r.tables.empty());
      CHECK(!r.description.empty());
    }
  }

  TEST_CASE("unknown kind and variant are configuration errors") {
    CHECK_THROWS_AS(run_experiment(Config::parse("kind = warp\n"), "x", {}), ConfigError);
    CHECK_THROWS_AS(run_experiment(Config::parse("kind = gate\nvariant = teleport\n"), "x", {}), ConfigError);
  }

  TEST_CASE("seed override changes stochastic output") {
    const BundledScenario *s = nullptr;
    for (const auto &b : bundled_scenarios())
      if (std::string(b.name) == "cool.sideband") s = &b;
    REQUIRE(s != nullptr);
    RunOptions a, b;
    a.seed = 1;
    b.seed = 2;
    auto ra = run_experiment(Config::parse(s->text), "c", a), rb = run_experiment(Config::parse(s->text), "c", b);
    CHECK(to_csv(ra.tables[0]) != to_csv(rb.tables[0]));
    auto rc = run_experiment(Config::parse(s->text), "c", a);
    CHECK(to_csv(ra.tables[0]) == to_csv(rc.tables[0]));
  }

  TEST_CASE("manifest records the seed") {
    RunResult r;
    r.name = "n";
    r.kind = "trap";
    r.seed = 77;
    CHECK(manifest_text(r, "origin").find("77") != std::string::npos);
  }
}
