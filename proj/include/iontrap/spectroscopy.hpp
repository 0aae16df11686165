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

#ifndef IONTRAP_SPECTROSCOPY_HPP
#define IONTRAP_SPECTROSCOPY_HPP

#include <cstdint>

namespace iontrap {

/// P_down after pi/2 (phase phi1), free precession T_R at detuning
/// omega_offset, pi/2 (phase phi2), built from rotation matrices.
/// ledger_phase is an extra spin phase accumulated during the gap.
double ramsey_probability(double omega_offset, double T_R, double phi1 = 0.0, double phi2 = 0.0,
                          double ledger_phase = 0.0);

/// Closed form of the same fringe.
double ramsey_closed_form(double omega_offset, double T_R, double phi1 = 0.0, double phi2 = 0.0,
                          double ledger_phase = 0.0);

/// 1 / sqrt(L^(2 eps) T_R tau), eps = 1 for entangled states and 1/2
/// otherwise. RangeError unless tau >= 10 T_R.
double projection_noise_stability(int L, double T_R, double tau, bool entangled);

/// Standard deviation over runs of the frequency estimate from binomial
/// sampling of L unentangled atoms on the side of the Ramsey fringe.
double projection_noise_monte_carlo(int L, double T_R, double tau, int runs, std::uint64_t seed);

struct ClockParams {
  int L = 1;
  double C = 1.0;       // LO noise coefficient
  double n_exp = 0.0;   // LO noise exponent, >= -1/2
  double epsilon = 0.5; // 1/2 or 1
  double tau = 1.0;     // total averaging time [s]
  double K2 = 2.0, K3 = 2.0;
};

enum class ClockMode { ConstrainedK3, ConstrainedK1 };

struct ClockResult {
  double T_R;
  double domega;  // locked stability at tau [rad/s]
  double K1;      // K1 implied (ConstrainedK3) or 1
  double L_exponent;
};

/// Locked-oscillator stability under the sampling-time constraints.
ClockResult clock_lock_analysis(const ClockParams &p, ClockMode mode);

}  // namespace iontrap

#endif
