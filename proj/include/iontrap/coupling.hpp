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

#ifndef IONTRAP_COUPLING_HPP
#define IONTRAP_COUPLING_HPP

#include <vector>

namespace iontrap {

struct CouplingParams {
  double Omega = 0;  // base Rabi frequency [rad/s]
  double eta = 0;    // Lamb-Dicke parameter
};

/// Generalized Laguerre polynomial L_n^alpha(x) by upward recurrence.
double laguerre(int n, double alpha, double x);

enum class RabiMode { Exact, LambDicke };

/// Signed Rabi frequency between Fock levels n1 and n2. The sign is that of
/// the Laguerre factor; the magnitude is symmetric in (n1, n2).
double rabi_frequency(int n1, int n2, const CouplingParams &c, RabiMode mode = RabiMode::Exact);

/// Roots eta in (0, 1) of L_n(eta^2) = (2k+1)/(2m), ascending. With
/// reciprocal = true the target is 2m/(2k+1). NoRootError if none exist.
std::vector<double> magic_eta(int level_n, int k, int m, bool reciprocal = false);

struct ModeEnsemble {
  std::vector<double> eta;
  std::vector<double> nbar;
  int logic_mode = -1;  // excluded from the products; -1 keeps every mode
};

struct DebyeWallerStats {
  double mean_factor;  // product of exp(-eta^2 (nbar + 1/2))
  double rms_exact;    // fractional, from the Bessel product
  double rms_approx;   // fractional, lowest order in eta^4
  double prob_within;  // Pr(|dOmega/Omega| < eps)
};

DebyeWallerStats debye_waller_stats(const ModeEnsemble &e, double eps);

enum class Parity { Sine, Cosine };

struct StandingWave {
  std::vector<double> C;
  double suppression;  // eta^(2M)
};

/// Amplitudes C_m of a field sum C_m sin(k_m z) or C_m cos(k_m z) whose
/// low-order Taylor terms cancel. SingularSystemError for degenerate k.
StandingWave standing_wave_coefficients(const std::vector<double> &k, Parity parity, double eta = 0.0);

/// <n1| sum C_m f(eta k_m/k_1 (a + a^dagger)) |n2> with f = sin or cos.
double standing_wave_matrix_element(int n1, int n2, double eta, const std::vector<double> &k,
                                    const std::vector<double> &C, Parity parity);

struct SpontaneousEmission {
  double xi;
  double kappa_opt;
  double xi_opt;
};

/// Ratio of spontaneous scattering to the sideband Rabi rate at branching
/// ratio kappa, plus the optimum over kappa.
SpontaneousEmission spontaneous_emission_ratio(double Gamma_s, double Omega1, double eta, double Delta, double kappa);
double raman_spontaneous_ratio(double Gamma, double Delta_R);

struct Crosstalk {
  double intensity_ratio;
  double field_ratio;
};

Crosstalk beam_crosstalk(double w0, double r);

struct StarkAddressing {
  double epsilon;
  double xi_phase;  // [rad], in [0, 2 pi)
};

/// Light-shift ratio that makes the neighbour complete m full cycles during a
/// theta pulse on the target.
StarkAddressing stark_addressing_epsilon(double theta, int m);

/// Fractional power-noise floor set by photon shot noise.
double shot_noise_floor(double P, double tau_op, double wavelength, double eta_det, double eps_split);

}  // namespace iontrap

#endif
