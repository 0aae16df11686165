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

#ifndef IONTRAP_COOLING_HPP
#define IONTRAP_COOLING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace iontrap {

enum class PulseStrategy { Fixed, Randomized, Schedule };

struct CoolingConfig {
  double eta = 0.1;
  double omega_z = 0;        // [rad/s]
  double omega_R = 0;        // recoil frequency [rad/s]
  double gamma_rad = 0;      // repump linewidth [rad/s], only for the limit
  double Omega = 1.0;        // carrier Rabi frequency Omega_{0,0}/eta-free [rad/s]
  PulseStrategy strategy = PulseStrategy::Randomized;
  int cycles = 50;
  int scatters_per_cycle = 2;
  // Fixed pulse time [s]; zero means a pi pulse on the 1 -> 0 sideband.
  double pulse_time = 0;
  // Pulse times in units of the 1 -> 0 pi time, used cyclically.
  std::vector<double> schedule;
  double random_low = 0.7, random_high = 1.3;
  std::uint64_t seed = 1;
};

struct CoolingResult {
  std::vector<double> P;            // final Fock populations
  std::vector<double> nbar;         // <n> after each cycle, entry 0 is the input
  std::vector<double> P0;           // ground population after each cycle
  std::vector<double> pulse_times;  // [s], one per cycle
  std::vector<std::string> warnings;
};

/// Incoherent red-sideband cooling with repump recoil. initial holds the
/// diagonal of the motional density matrix; the top level absorbs any
/// recoil past the truncation.
CoolingResult sideband_cool(const std::vector<double> &initial, const CoolingConfig &cfg);

/// Transfer probability of level n (n >= 1) for pulse time t.
double red_transfer_probability(int n, double t, const CoolingConfig &cfg);

/// (gamma / 2 omega_z)^2. RegimeError unless gamma < omega_z.
double cooling_limit(double gamma_rad, double omega_z);

/// hbar k^2 / 2m [rad/s].
double recoil_frequency(double mass, double wavelength);

}  // namespace iontrap

#endif
