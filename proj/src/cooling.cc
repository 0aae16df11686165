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

#include "iontrap/cooling.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "iontrap/constants.hpp"
#include "iontrap/coupling.hpp"
#include "iontrap/errors.hpp"

namespace iontrap {

using constants::pi;

double red_transfer_probability(int n, double t, const CoolingConfig &cfg) {
  if (n < 1) return 0.0;
  double w = rabi_frequency(n - 1, n, {cfg.Omega, cfg.eta});
  double s = std::sin(w * t);
  return s * s;
}

CoolingResult sideband_cool(const std::vector<double> &initial, const CoolingConfig &cfg) {
  if (cfg.cycles < 1) throw RangeError("sideband_cool: cycles must be >= 1");
  if (initial.empty()) throw DimensionError("sideband_cool: empty population vector");
  if (!(cfg.omega_z > 0)) throw RangeError("sideband_cool: omega_z must be positive");
  double eps = cfg.omega_R / cfg.omega_z;
  if (eps < 0 || eps > 1) throw RangeError("sideband_cool: omega_R / omega_z outside [0, 1]");
  if (cfg.strategy == PulseStrategy::Schedule && cfg.schedule.empty())
    throw RangeError("sideband_cool: schedule strategy needs a schedule");

  const int N = static_cast<int>(initial.size());
  double t_pi = pi / (2.0 * std::abs(rabi_frequency(0, 1, {cfg.Omega, cfg.eta})));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(cfg.random_low, cfg.random_high);

  CoolingResult res;
  std::vector<double> P = initial;
  auto record = [&] {
    double m = 0;
    for (int n = 0; n < N; ++n) m += n * P[n];
    res.nbar.push_back(m);
    res.P0.push_back(P[0]);
  };
  record();
  if (cfg.eta * cfg.eta * res.nbar[0] > 0.1)
    res.warnings.push_back("eta^2 <n> = " + std::to_string(cfg.eta * cfg.eta * res.nbar[0]) +
                           " is not small; sideband couplings leave the Lamb-Dicke regime");

  for (int k = 0; k < cfg.cycles; ++k) {
    double t;
    switch (cfg.strategy) {
      case PulseStrategy::Fixed:
        t = cfg.pulse_time > 0 ? cfg.pulse_time : t_pi;
        break;
      case PulseStrategy::Randomized:
        t = uni(rng) * t_pi;
        break;
      default:
        t = cfg.schedule[k % cfg.schedule.size()] * t_pi;
    }
    res.pulse_times.push_back(t);
    std::vector<double> moved(N, 0.0), kept(P);
    for (int n = 1; n < N; ++n) {
      double p = red_transfer_probability(n, t, cfg) * P[n];
      moved[n - 1] += p;
      kept[n] -= p;
    }
    for (int s = 0; s < cfg.scatters_per_cycle; ++s) {
      for (int n = N - 1; n >= 0; --n) {
        double up = eps * moved[n];
        if (n + 1 < N) {
          moved[n + 1] += up;
          moved[n] -= up;
        }
      }
    }
    for (int n = 0; n < N; ++n) P[n] = kept[n] + moved[n];
    record();
  }
  res.P = P;
  return res;
}

double cooling_limit(double gamma_rad, double omega_z) {
  if (!(gamma_rad < omega_z))
    throw RegimeError("cooling_limit: gamma must be below omega_z for resolved sidebands");
  double r = gamma_rad / (2.0 * omega_z);
  return r * r;
}

double recoil_frequency(double mass, double wavelength) {
  double k = 2.0 * pi / wavelength;
  return constants::hbar * k * k / (2.0 * mass);
}

}  // namespace iontrap
