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
#include "iontrap/coupling.hpp"
#include "iontrap/errors.hpp"
#include "oracles.hpp"

using namespace iontrap;

TEST_SUITE("coupling") {
  TEST_CASE("Laguerre polynomials match the explicit sum") {
    for (int n = 0; n <= 12; ++n)
      for (int a = 0; a <= 4; ++a)
        for (double x : {0.0, 0.01, 0.3, 1.0, 2.5})
          CHECK(std::abs(laguerre(n, a, x) - oracle::laguerre_sum(n, a, x)) < 1e-11 * oracle::laguerre_sum(n, a, 0.0));
  }

  TEST_CASE("Rabi frequencies match the matrix exponential on random draws") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> eta_d(0.0, 0.5);
    std::uniform_int_distribution<int> n_d(0, 12);
    for (int k = 0; k < 40; ++k) {
      double eta = eta_d(rng);
      int a = n_d(rng), b = n_d(rng);
      Eigen::MatrixXcd D = oracle::expm_displacement(eta);
      CHECK(std::abs(rabi_frequency(a, b, {2.5, eta}) - 2.5 * oracle::expm_rabi_signed(D, a, b)) < 1e-9);
    }
  }

  TEST_CASE("diagonal elements change sign with the Laguerre factor") {
    Eigen::MatrixXcd D = oracle::expm_displacement(0.5);
    CHECK(rabi_frequency(8, 8, {1, 0.5}) < 0);
    CHECK(rabi_frequency(8, 8, {1, 0.5}) == doctest::Approx(oracle::expm_rabi_signed(D, 8, 8)).epsilon(1e-10));
  }

  TEST_CASE("Rabi matrix is symmetric in its levels") {
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        CHECK(rabi_frequency(a, b, {1, 0.3}) == doctest::Approx(rabi_frequency(b, a, {1, 0.3})));
  }

  TEST_CASE("Lamb-Dicke limit reduces to eta sqrt(n+1)") {
    for (int n = 0; n < 5; ++n) {
      double ld = rabi_frequency(n + 1, n, {1, 0.01}, RabiMode::LambDicke);
      CHECK(ld == doctest::Approx(0.01 * std::sqrt(n + 1.0)).epsilon(1e-3));
      CHECK(rabi_frequency(n + 1, n, {1, 0.01}) == doctest::Approx(ld).epsilon(1e-3));
    }
  }

  TEST_CASE("negative level throws") { CHECK_THROWS_AS(rabi_frequency(-1, 0, {1, 0.1}), RangeError); }

  TEST_CASE("magic eta solves the Laguerre condition") {
    auto e = magic_eta(1, 0, 1);
    REQUIRE(!e.empty());
    CHECK(e.front() == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (int level : {1, 2, 3})
      for (auto km : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 3}}) {
        double target = (2.0 * km.first + 1.0) / (2.0 * km.second);
        for (double eta : magic_eta(level, km.first, km.second))
          CHECK(oracle::laguerre_sum(level, 0, eta * eta) == doctest::Approx(target).epsilon(1e-10));
      }
    CHECK_THROWS_AS(magic_eta(1, 2, 1), NoRootError);
  }

  TEST_CASE("Debye-Waller probability matches the erf form") {
    ModeEnsemble e{std::vector<double>(100, 0.01), std::vector<double>(100, 0.1), -1};
    DebyeWallerStats s = debye_waller_stats(e, 1e-4);
    double want = std::erf(1e-4 / std::sqrt(2.0 * 100 * 1e-8 * 0.1 * 1.1));
    CHECK(s.prob_within == doctest::Approx(want).epsilon(1e-9));
    CHECK(s.mean_factor == doctest::Approx(std::exp(-100 * 1e-4 * 0.6)).epsilon(1e-12));
    CHECK(s.rms_exact == doctest::Approx(s.rms_approx).epsilon(1e-2));
  }

  TEST_CASE("logic mode is excluded from the spread") {
    ModeEnsemble a{{0.01, 0.2}, {0.1, 0.1}, 1}, b{{0.01}, {0.1}, -1};
    CHECK(debye_waller_stats(a, 1e-4).rms_exact == doctest::Approx(debye_waller_stats(b, 1e-4).rms_exact));
  }

  TEST_CASE("standing wave coefficients reject degenerate wavevectors") {
    CHECK_THROWS_AS(standing_wave_coefficients({1.0, 1.0}, Parity::Sine), SingularSystemError);
    CHECK_THROWS_AS(standing_wave_coefficients({}, Parity::Cosine), SingularSystemError);
  }

  TEST_CASE("beam crosstalk falls with distance") {
    Crosstalk near = beam_crosstalk(5e-6, 5e-6), far = beam_crosstalk(5e-6, 10e-6);
    CHECK(far.intensity_ratio < near.intensity_ratio);
    CHECK(near.field_ratio * near.field_ratio == doctest::Approx(near.intensity_ratio));
    CHECK_THROWS_AS(beam_crosstalk(0.0, 1e-6), RangeError);
  }

  TEST_CASE("Stark addressing needs a positive angle") {
    CHECK_THROWS_AS(stark_addressing_epsilon(0.0, 1), NoRootError);
  }
}
