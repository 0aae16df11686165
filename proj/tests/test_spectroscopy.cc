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
#include <random>

#include "doctest.h"
#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/spectroscopy.hpp"
#include "oracles.hpp"

using namespace iontrap;
namespace c = iontrap::constants;

TEST_SUITE("spectroscopy") {
  TEST_CASE("composed Ramsey unitaries equal the closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
      double w = u(rng), T = std::abs(u(rng)) + 0.1, p1 = u(rng), p2 = u(rng), led = u(rng);
      CHECK(ramsey_probability(w, T, p1, p2, led) == doctest::Approx(ramsey_closed_form(w, T, p1, p2, led)).epsilon(1e-12));
    }
  }

  TEST_CASE("Ramsey fringe center and half-period") {
    CHECK(ramsey_closed_form(0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ramsey_closed_form(c::pi, 1.0) == doctest::Approx(1.0));
    CHECK(ramsey_closed_form(0.0, 1.0, 0.0, 0.0, c::pi) == doctest::Approx(1.0));
  }

  TEST_CASE("projection noise scales with ion number") {
    double a = projection_noise_stability(1, 1e-3, 1.0, false);
    CHECK(projection_noise_stability(100, 1e-3, 1.0, false) == doctest::Approx(a / 10));
    CHECK(projection_noise_stability(100, 1e-3, 1.0, true) == doctest::Approx(a / 100));
    CHECK(a == doctest::Approx(1.0 / std::sqrt(1e-3 * 1.0)));
    CHECK_THROWS_AS(projection_noise_stability(1, 1.0, 5.0, false), RangeError);
  }

  TEST_CASE("binomial Monte Carlo matches the projection limit") {
    double mc = projection_noise_monte_carlo(10, 1e-3, 1.0, 4000, 11);
    double an = projection_noise_stability(10, 1e-3, 1.0, false);
    CHECK(mc == doctest::Approx(an).epsilon(0.1));
    CHECK(projection_noise_monte_carlo(10, 1e-3, 1.0, 500, 5) == projection_noise_monte_carlo(10, 1e-3, 1.0, 500, 5));
  }

  TEST_CASE("K1 mode matches the bisection oracle") {
    for (int L : {1, 10, 100})
      for (double n : {-0.5, 0.0, 1.0})
        for (double eps : {0.5, 1.0}) {
          ClockParams p;
          p.L = L;
          p.n_exp = n;
          p.epsilon = eps;
          p.C = 3.0;
          p.K2 = 4.0;
          ClockResult r = clock_lock_analysis(p, ClockMode::ConstrainedK1);
          // C (K2 T)^n = L^-eps / sqrt(T K2 T)
          auto f = [&](double lt) {
            double T = std::exp(lt);
            return std::log(p.C * std::pow(p.K2 * T, n)) - std::log(std::pow(L, -eps) / (std::sqrt(p.K2) * T));
          };
          double T = std::exp(oracle::bisect(f, -80, 80));
          CHECK(r.T_R == doctest::Approx(T).epsilon(1e-9));
          CHECK(r.domega == doctest::Approx(std::pow(L, -eps) / std::sqrt(T * p.tau)).epsilon(1e-9));
        }
  }

  TEST_CASE("entanglement helps only for positive noise exponents") {
    auto ratio = [](double n) {
      ClockParams a, b;
      a.L = b.L = 100;
      a.n_exp = b.n_exp = n;
      a.epsilon = 0.5;
      b.epsilon = 1.0;
      return clock_lock_analysis(a, ClockMode::ConstrainedK3).domega / clock_lock_analysis(b, ClockMode::ConstrainedK3).domega;
    };
    CHECK(ratio(0.0) == doctest::Approx(1.0));
    CHECK(ratio(1.0) > 1.0);
    CHECK(ratio(-0.5) < 1.0);
  }

  TEST_CASE("clock inputs are validated") {
    ClockParams p;
    p.n_exp = -1;
    CHECK_THROWS_AS(clock_lock_analysis(p, ClockMode::ConstrainedK3), RangeError);
    p.n_exp = 0;
    p.K2 = 0.5;
    CHECK_THROWS_AS(clock_lock_analysis(p, ClockMode::ConstrainedK1), RangeError);
  }
}
