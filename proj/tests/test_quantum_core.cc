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
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "iontrap/errors.hpp"
#include "iontrap/quantum_core.hpp"

using namespace iontrap;

TEST_SUITE("quantum_core") {
  TEST_CASE("index layout interleaves spin within each Fock level") {
    CHECK(QuantumState::idx(Spin::Down, 0) == 0);
    CHECK(QuantumState::idx(Spin::Up, 0) == 1);
    CHECK(QuantumState::idx(Spin::Down, 3) == 6);
    QuantumState s = fock_state(Spin::Up, 2, 4);
    CHECK(s.dim() == 10);
    CHECK(std::abs(s.amp[5]) == doctest::Approx(1.0));
    CHECK(s.amp.norm() == doctest::Approx(1.0));
  }

  TEST_CASE("fock level outside the truncation throws") {
    CHECK_THROWS_AS(fock_state(Spin::Down, 5, 4), DimensionError);
  }

  TEST_CASE("coherent state has Poisson populations") {
    const double a2 = 2.25;
    QuantumState s = coherent_state({1.5, 0.0}, 40);
    auto P = fock_populations(s);
    for (int n = 0; n < 15; ++n) {
      double poisson = std::exp(-a2 + n * std::log(a2) - std::lgamma(n + 1.0));
      CHECK(P[n] == doctest::Approx(poisson).epsilon(1e-10));
    }
  }

  TEST_CASE("truncation guard warns or throws") {
    std::vector<std::string> w;
    TruncationGuard soft;
    soft.warnings = &w;
    coherent_state({3.0, 0.0}, 5, Spin::Down, soft);
    CHECK(!w.empty());
    TruncationGuard hard;
    hard.strict = true;
    CHECK_THROWS_AS(coherent_state({3.0, 0.0}, 5, Spin::Down, hard), TruncationError);
  }

  TEST_CASE("thermal distribution is geometric") {
    auto P = thermal_distribution(1.0, 60);
    double sum = std::accumulate(P.begin(), P.end(), 0.0), mean = 0;
    for (size_t n = 0; n < P.size(); ++n) mean += n * P[n];
    CHECK(sum == doctest::Approx(1.0));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
    for (int n = 0; n < 10; ++n) CHECK(P[n] == doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-12));
    DensityMatrix r = thermal_state(0.5, 40);
    CHECK(r.rho.trace().real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(thermal_state(-1.0, 10), RangeError);
  }

  TEST_CASE("apply_unitary checks shape and unitarity") {
    QuantumState s = fock_state(Spin::Down, 0, 1);
    CHECK_THROWS_AS(apply_unitary(s, Eigen::MatrixXcd::Identity(3, 3)), DimensionError);
    CHECK_THROWS_AS(apply_unitary(s, 2.0 * Eigen::MatrixXcd::Identity(4, 4)), DimensionError);
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
    swap(0, 1) = swap(1, 0) = swap(2, 2) = swap(3, 3) = 1.0;
    apply_unitary(s, swap);
    CHECK(spin_population(s, Spin::Up) == doctest::Approx(1.0));
  }

  TEST_CASE("overlap of orthogonal and identical states") {
    QuantumState a = fock_state(Spin::Down, 1, 3), b = fock_state(Spin::Up, 1, 3);
    CHECK(std::abs(overlap(a, b)) == doctest::Approx(0.0));
    CHECK(std::abs(overlap(a, a)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(overlap(a, fock_state(Spin::Down, 0, 2)), DimensionError);
  }

  TEST_CASE("detection false negatives decay exponentially") {
    CHECK(detection_false_negative(0.0) == doctest::Approx(1.0));
    CHECK(detection_false_negative(10.0) == doctest::Approx(std::exp(-10.0)));
    CHECK_THROWS_AS(detection_false_negative(-1.0), RangeError);
  }
}
