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

#include "iontrap/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/pulse_engine.hpp"

namespace iontrap {

using constants::pi;

double ramsey_probability(double omega_offset, double T_R, double phi1, double phi2, double ledger_phase) {
  const cplx I1(0, 1);
  double a = 0.5 * (omega_offset * T_R + ledger_phase);
  Eigen::Matrix2cd free;
  free << std::exp(I1 * a), 0, 0, std::exp(-I1 * a);
  Eigen::Vector2cd psi(1.0, 0.0);
  psi = rotation(pi / 2, phi2) * free * rotation(pi / 2, phi1) * psi;
  return std::norm(psi[0]);
}

double ramsey_closed_form(double omega_offset, double T_R, double phi1, double phi2, double ledger_phase) {
  return 0.5 * (1.0 - std::cos(omega_offset * T_R + ledger_phase - (phi2 - phi1)));
}

double projection_noise_stability(int L, double T_R, double tau, bool entangled) {
  if (L < 1) throw RangeError("projection_noise_stability: L must be >= 1");
  if (!(tau >= 10.0 * T_R) || !(T_R > 0)) throw RangeError("projection_noise_stability: need tau >= 10 T_R");
  double eps = entangled ? 1.0 : 0.5;
  return 1.0 / std::sqrt(std::pow(L, 2.0 * eps) * T_R * tau);
}

double projection_noise_monte_carlo(int L, double T_R, double tau, int runs, std::uint64_t seed) {
  projection_noise_stability(L, T_R, tau, false);
  const long N = static_cast<long>(std::floor(tau / T_R));
  std::mt19937_64 rng(seed);
  // Operating point on the fringe side: P = 1/2 at zero offset with phase pi/2.
  std::binomial_distribution<int> bin(L, 0.5);
  double slope = 0.5 * T_R;  // |dP/d omega|
  double s1 = 0, s2 = 0;
  for (int r = 0; r < runs; ++r) {
    double acc = 0;
    for (long k = 0; k < N; ++k) acc += (static_cast<double>(bin(rng)) / L - 0.5) / slope;
    double est = acc / N;
    s1 += est;
    s2 += est * est;
  }
  double mean = s1 / runs;
  return std::sqrt(std::max(0.0, s2 / runs - mean * mean) * runs / (runs - 1.0));
}

ClockResult clock_lock_analysis(const ClockParams &p, ClockMode mode) {
  if (p.n_exp < -0.5) throw RangeError("clock_lock_analysis: n_exp must be >= -1/2");
  if (!(p.K2 > 1) || !(p.K3 > 1)) throw RangeError("clock_lock_analysis: K2 and K3 must exceed 1");
  if (p.L < 1 || !(p.C > 0) || !(p.tau > 0)) throw RangeError("clock_lock_analysis: need L >= 1, C > 0, tau > 0");
  const double n = p.n_exp, e = p.epsilon, L = p.L;
  ClockResult r{};
  if (mode == ClockMode::ConstrainedK3) {
    r.T_R = std::pow(pi / (p.C * p.K3 * std::pow(L, 2.0 * e - 1.0)), 1.0 / (n + 1.0));
    r.L_exponent = -(n * e + 0.5) / (n + 1.0);
    r.domega = std::pow(p.C * p.K3 / pi, 1.0 / (2.0 * (n + 1.0))) * std::pow(L, r.L_exponent) / std::sqrt(p.tau);
    r.K1 = pi * std::pow(p.K2, n + 0.5) / p.K3 * std::pow(L, 1.0 - e);
  } else {
    r.T_R = std::pow(1.0 / (p.C * std::pow(p.K2, n + 0.5) * std::pow(L, e)), 1.0 / (n + 1.0));
    r.L_exponent = -e * (2.0 * n + 1.0) / (2.0 * n + 2.0);
    r.domega =
        std::pow(p.C * std::pow(p.K2, n + 0.5), 1.0 / (2.0 * (n + 1.0))) * std::pow(L, r.L_exponent) / std::sqrt(p.tau);
    r.K1 = 1.0;
  }
  return r;
}

}  // namespace iontrap
