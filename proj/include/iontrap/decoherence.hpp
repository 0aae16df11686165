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

#ifndef IONTRAP_DECOHERENCE_HPP
#define IONTRAP_DECOHERENCE_HPP

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "iontrap/coupling.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/quantum_core.hpp"

namespace iontrap {

struct BathParams {
  double gamma = 0;  // energy relaxation rate [1/s]
  double nbar = 0;   // bath occupation

  double t_star() const { return 1.0 / (nbar * gamma); }
};

/// Right-hand side of the motional master equation on the truncated Fock
/// space. Level n_max has no upward channel, so the trace is conserved.
Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd &rho, const BathParams &b);

/// Largest step accepted by master_equation_evolve.
double master_max_step(const BathParams &b, int n_max);

/// Fixed-step RK4 to time t with Hermitian symmetrization after each step.
/// StiffnessError if dt exceeds master_max_step. observer, when set, is called
/// after every step with (time, rho).
DensityMatrix master_equation_evolve(const DensityMatrix &rho, const BathParams &b, double t, double dt,
                                     const TruncationGuard &guard = {},
                                     const std::function<void(double, const Eigen::MatrixXcd &)> &observer = {});

double mean_n(const DensityMatrix &rho);
double mean_n_evolution(double n0, const BathParams &b, double t);

struct RabiSignal {
  std::vector<double> tau;
  std::vector<double> P_down;
};

/// gamma_n = gamma0 sqrt(n + 1) unless gamma_n is given.
std::vector<double> decay_constants(int count, double gamma0, const std::optional<std::vector<double>> &gamma_n = {});

/// Blue-sideband flopping signal from Fock populations.
RabiSignal rabi_decay_signal(const std::vector<double> &P, double gamma0, const CouplingParams &c,
                             const std::vector<double> &tau, const std::optional<std::vector<double>> &gamma_n = {});

struct PopulationEstimate {
  std::vector<double> P;          // non-negative least squares
  std::vector<double> P_fourier;  // matched-filter projection
  double residual;                // rms of the fit
};

/// Recovers P_0..P_{n_cut} from a flopping signal with known frequencies and
/// decay constants. IllConditionedError when frequencies are unresolved or
/// the sampling violates Nyquist.
PopulationEstimate invert_populations(const RabiSignal &sig, const CouplingParams &c, int n_cut, double gamma0,
                                      const std::optional<std::vector<double>> &gamma_n = {});

/// Lawson-Hanson non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, int max_iter = 500);

struct RabiFit {
  double gamma0;
  double Omega;  // Omega_{1,0} [rad/s]
  double rms;
};

/// Least-squares fit of 1/2 (1 + exp(-gamma tau) cos(2 Omega tau)).
RabiFit fit_rabi_decay(const RabiSignal &sig, std::optional<double> Omega_guess = {});

enum class NoiseDistribution { Gaussian, Laplacian };

/// <P_down>(tau) under quasi-static Rabi-frequency noise of rms dOmega.
std::vector<double> slow_amplitude_noise_envelope(NoiseDistribution d, double dOmega, const std::vector<double> &tau,
                                                  double Omega0);

struct FastNoise {
  std::vector<double> closed_form;
  std::vector<double> exact;  // phase average by quadrature
};

/// Sinusoidal Rabi-frequency modulation at omega_amp with random phase.
/// RangeError if |dOmega / omega_amp| > 0.3.
FastNoise fast_amplitude_noise_visibility(double dOmega, double omega_amp, const std::vector<double> &tau,
                                          double Omega0);

struct StarkNoise {
  double omega_s;  // differential light shift [rad/s]
  double ratio;    // <dphi^2> / <dTheta^2>
};

StarkNoise stark_phase_noise_ratio(double g1, double g2, double eta, double Delta_R, bool correlated);

enum class Envelope { Square, SmoothOnAbruptOff, Smooth };

struct SpectatorResult {
  double C_s_final;            // |C_s| after the pulse
  double adiabatic_estimate;   // |Omega' C_down / Delta|
  double C_down_final;         // |C_down|
  double duration;             // [s]
};

/// Integrates the three-level amplitudes through a 2 pi pulse on the qubit
/// with envelope edges of width tau_r. compensate adds the light shift to the
/// drive detuning.
SpectatorResult spectator_leakage(double Omega, double Omega_prime, double Delta, Envelope env, double tau_r,
                                  bool compensate = false);

struct BFieldModulation {
  double eta_m;
  double carrier_factor;           // J0(eta_m)
  std::vector<double> sidebands;   // J_k(eta_m), k = 0..kmax
};

/// RangeError if omega_m < 10 Omega_nn.
BFieldModulation bfield_modulation(double beta0, double omega0, double omega_m, double Omega_nn, int kmax = 4);

struct Coherence {
  cplx rho01;  // C_0^* C_1
  double P[4]; // P_down at dphi = 0, pi/2, pi, -pi/2
};

/// Red-sideband pi then carrier pi/2 analysis of a state in span{|down, n>}.
Coherence coherence_tomography(const QuantumState &s, const CouplingParams &c);

double electric_dipole_rate(double omega0, double dipole);
double magnetic_dipole_rate(double omega0, double moment);

}  // namespace iontrap

#endif
