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

#include <cmath>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"

using namespace iontrap;
namespace c = iontrap::constants;

namespace {
std::string key_of(const std::string &text, const std::string &path, Dim d) {
  try {
    Config::parse(text).quantity(path, d);
  } catch (const ConfigError &e) {
    return e.key_path();
  }
  return "<no error>";
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("units convert to SI") {
    CHECK(parse_quantity("10 MHz", Dim::AngularFrequency, "k") == doctest::Approx(c::two_pi * 1e7));
    CHECK(parse_quantity("2 Mrad/s", Dim::AngularFrequency, "k") == doctest::Approx(2e6));
    CHECK(parse_quantity("0.5 pi", Dim::Angle, "k") == doctest::Approx(c::pi / 2));
    CHECK(parse_quantity("90 deg", Dim::Angle, "k") == doctest::Approx(c::pi / 2));
    CHECK(parse_quantity("260 um", Dim::Length, "k") == doctest::Approx(260e-6));
    CHECK(parse_quantity("9 u", Dim::Mass, "k") == doctest::Approx(9 * c::amu));
    CHECK(parse_quantity("1 Torr", Dim::Pressure, "k") == doctest::Approx(133.322).epsilon(1e-4));
    CHECK(parse_quantity("11.11 1/mm2", Dim::InverseArea, "k") == doctest::Approx(11.11e6));
    CHECK(parse_quantity("0.8045 A3", Dim::Volume, "k") == doctest::Approx(0.8045e-30));
    CHECK(parse_quantity("1e4 /s", Dim::Rate, "k") == doctest::Approx(1e4));
    CHECK(parse_quantity("3", Dim::None, "k") == 3.0);
  }

  TEST_CASE("malformed and missing units name the key") {
    CHECK_THROWS_AS(parse_quantity("10 MHZz", Dim::AngularFrequency, "a.b"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("10", Dim::Length, "a.b"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("ten MHz", Dim::AngularFrequency, "a.b"), ConfigError);
    CHECK(key_of("blk {\n  f = 10 MHZz\n}\n", "blk.f", Dim::AngularFrequency) == "blk.f");
    try {
      parse_quantity("10 MHZz", Dim::AngularFrequency, "x");
    } catch (const ConfigError &e) {
      CHECK(std::string(e.what()).find("unknown unit 'MHZz'") != std::string::npos);
    }
  }

  TEST_CASE("grammar: blocks, lists, strings, comments, expect") {
    Config cfg = Config::parse(
        "# comment\n"
        "name = demo  # trailing\n"
        "title = \"a # not a comment\"\n"
        "L = [1, 2, 3]\n"
        "taus = [1 us, 2 us]\n"
        "inner {\n"
        "  x = 2 mm\n"
        "}\n"
        "expect {\n"
        "  a < 3\n"
        "  b ~ 1 +- 5%\n"
        "}\n");
    CHECK(cfg.string("name") == "demo");
    CHECK(cfg.string("title") == "a # not a comment");
    CHECK(cfg.integers("L") == std::vector<long>{1, 2, 3});
    auto t = cfg.quantities("taus", Dim::Time);
    REQUIRE(t.size() == 2);
    CHECK(t[1] == doctest::Approx(2e-6));
    CHECK(cfg.quantity("inner.x", Dim::Length) == doctest::Approx(2e-3));
    REQUIRE(cfg.block("expect") != nullptr);
    CHECK(cfg.block("expect")->lines.size() == 2);
    CHECK(cfg.has("inner.x"));
    CHECK(!cfg.has("inner.y"));
    CHECK(cfg.number("missing", 7.0) == 7.0);
  }

  TEST_CASE("duplicate keys, unclosed blocks and stray text are errors") {
    CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("blk {\n a = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("just words\n"), ConfigError);
  }

  TEST_CASE("unused keys are rejected with their path") {
    Config cfg = Config::parse("a = 1\nblk {\n  b = 2\n  c = 3\n}\n");
    cfg.number("a");
    cfg.number("blk.b");
    try {
      cfg.reject_unused();
      FAIL("expected an error");
    } catch (const ConfigError &e) {
      CHECK(e.key_path() == "blk.c");
    }
  }

  TEST_CASE("missing required key") {
    Config cfg = Config::parse("a = 1\n");
    CHECK_THROWS_AS(cfg.number("b"), ConfigError);
    CHECK_THROWS_AS(cfg.integer("zz"), ConfigError);
  }

  TEST_CASE("list splitting respects quotes") {
    auto v = split_list("[\"a, b\", c]", "k");
    REQUIRE(v.size() == 2);
    CHECK(v[1] == "c");
  }
}
