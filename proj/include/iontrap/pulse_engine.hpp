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

#ifndef IONTRAP_PULSE_ENGINE_HPP
#define IONTRAP_PULSE_ENGINE_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iontrap/constants.hpp"
#include "iontrap/coupling.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/quantum_core.hpp"

namespace iontrap {

enum class TransitionKind { Carrier, Red, Blue };

struct Transition {
  TransitionKind kind = TransitionKind::Carrier;
  int order = 0;  // >= 1 for sidebands

  static Transition carrier() { return {TransitionKind::Carrier, 0}; }
  static Transition red(int k = 1) { return {TransitionKind::Red, k}; }
  static Transition blue(int k = 1) { return {TransitionKind::Blue, k}; }
};

struct PulseSpec {
  Transition transition;
  double theta = 0;  // pulse area 2 Omega t on the reference pair
  double phi = 0;    // field phase
  double Delta = 0;  // detuning [rad/s]
  CouplingParams coupling{1.0, 0.0};
  double zeta = 0;     // pulse-area error
  double phi_err = 0;  // phase error
  // Reference pair (n_down, n_up) for the pulse area. Defaults: (0, 0) for
  // the carrier, (0, k) blue, (k, 0) red.
  std::optional<std::pair<int, int>> reference;
};

/// Detuned two-level evolution for time t on one (down n, up n') pair with
/// signed coupling Omega and |n' - n| = dn. Basis order (up n', down n).
Eigen::Matrix2cd two_level_evolution(double Omega, double Delta, double phi, int dn, double t);

/// Same, parametrized by area theta = 2 |Omega| t.
Eigen::Matrix2cd two_level_rotation(double theta, double phi, double Delta, double Omega_eff, int dn = 0);

/// Single-qubit rotation R(theta, phi) acting on (C_down, C_up).
Eigen::Matrix2cd rotation(double theta, double phi);

/// Pulse duration implied by the spec's area on its reference pair.
double pulse_duration(const PulseSpec &p);

/// Unitary of the pulse over the whole (spin x Fock) space.
Eigen::MatrixXcd pulse_unitary(int n_max, const PulseSpec &p);

/// Applies a pulse. TruncationError if a sideband would carry population past
/// n_max; InvalidTransitionError for a malformed spec.
QuantumState apply_pulse(const QuantumState &s, const PulseSpec &p, const TruncationGuard &guard = {});

/// diag(1, 1, 1, e^{i phi}).
Eigen::Matrix4cd phase_gate(double phi);

/// Ideal reduced CN on {down 0, up 0, down 1, up 1}: motion controls spin.
Eigen::Matrix4cd ideal_cn();

struct GateReport {
  Eigen::MatrixXcd unitary;       // computational subspace
  Eigen::MatrixXd truth_table;    // |U_ij|^2
  double fidelity_vs_ideal = 0;   // basis-averaged |<ideal e_j|U e_j>|^2
  double leakage = 0;             // largest population left outside the subspace
};

/// Ramsey pulses with a 2 pi excursion through an auxiliary level on
/// |up, 1> <-> |aux, 0>. aux is the coupling of that transition; phi is the
/// R(theta, phi) phase of the first Ramsey pulse, the second uses phi + pi.
GateReport cn_gate_three_pulse(const CouplingParams &aux, double phi = constants::pi / 2);

/// Single carrier pulse at a magic eta. MagicEtaError if eta misses the
/// (k, m) value by more than 1e-10. unitary is divided by the n=0 block phase.
GateReport cn_gate_single_pulse(int k, int m, double eta, double phi = 0.0);

/// Unchecked variant used for sensitivity sweeps.
GateReport cn_gate_single_pulse_at(int k, int m, double eta, double phi);

/// Target of the single pulse construction.
Eigen::Matrix4cd single_pulse_target(int k, int m, double phi);

/// Truncated displacement exp(alpha a^dagger - alpha* a) on Fock levels 0..n_max.
Eigen::MatrixXcd displacement_operator(cplx alpha, int n_max);

/// Resonant classical drive: D(Omega1 t) on the motion, spin untouched.
QuantumState displacement_drive(const QuantumState &s, cplx Omega1, double t, const TruncationGuard &guard = {});

/// min over inputs of |<psi|V|psi>|^2 for a 2x2 unitary V.
double worst_case_fidelity(const Eigen::Matrix2cd &V);

struct ErrorModel {
  double zeta_rms = 0;
  double phi_rms = 0;
  bool systematic = false;  // every pulse gets +zeta_rms and +phi_rms
};

struct SequenceFidelity {
  double F_mean;
  double F_std;
  double coefficient;  // (1 - F_mean) / (M zeta^2) random, / (sum zeta)^2 systematic
  std::vector<double> per_trial;
};

/// Carrier-only sequence on a bare spin. Trial i draws from seed base_seed + i.
SequenceFidelity noisy_sequence_fidelity(const std::vector<PulseSpec> &seq, const ErrorModel &model, int trials,
                                         unsigned long long base_seed);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

struct PhaseLedger {
  std::map<int, double> phase;
  std::map<int, double> time;

  double phase_of(int ion) const;
};

struct DetuningSegment {
  double duration;
  double Delta;
};

/// Adds the integral of Delta over the segments starting at t_start.
/// TimeOrderError if t_start precedes the ion's last recorded time.
void phase_ledger_advance(PhaseLedger &ledger, int ion, double t_start, const std::vector<DetuningSegment> &profile);

}  // namespace iontrap

#endif
