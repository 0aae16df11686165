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

#ifndef IONTRAP_REGISTER_HPP
#define IONTRAP_REGISTER_HPP

#include <Eigen/Dense>

#include "iontrap/pulse_engine.hpp"

namespace iontrap {

/// L spin qubits sharing one bus mode with levels 0..n_bus. Amplitude index
/// is spins + 2^L * n, bit i of spins set when ion i is up. Couplings are
/// ideal: every pair of a transition sees the same Rabi frequency.
class Register {
 public:
  static constexpr int kMaxIons = 12;

  explicit Register(int L, int n_bus = 1, int max_ions = kMaxIons);

  int ions() const { return L_; }
  int bus_levels() const { return n_bus_ + 1; }
  Eigen::VectorXcd &amplitudes() { return amp_; }
  const Eigen::VectorXcd &amplitudes() const { return amp_; }

  /// Resets to |down...down>|0>.
  void reset();
  /// Sets a computational basis state with the bus in n.
  void set_basis(unsigned spins, int n = 0);

  /// R(theta, phi) on ion j, identical for every bus level.
  void carrier(int ion, double theta, double phi);
  /// First red sideband |down, n> <-> |up, n-1> on ion j with area theta.
  void red_sideband(int ion, double theta, double phi);
  /// Reduced CN with the bus (levels 0, 1) as control and ion j as target,
  /// by the three-pulse construction.
  void bus_cn(int ion);

  double bus_excited_population() const;

 private:
  int L_, n_bus_;
  Eigen::VectorXcd amp_;
  int index(unsigned spins, int n) const { return static_cast<int>(spins) + (1 << L_) * n; }
  void check_ion(int ion) const;
};

/// CN between ions c and t via the bus. BusNotGroundError if the bus is not
/// in |0>.
void cn_between_ions(Register &r, int c, int t);

/// 4x4 action of cn_between_ions on {dd, du, ud, uu} of (c, t) for an L-ion
/// register, bus starting and ending in |0>.
GateReport cn_between_ions_report(int L, int c, int t);

/// (|down...down> + e^{i phi}|up...up>)/sqrt 2 with the bus in |0>.
Register prepare_max_entangled(int L, int max_ions = Register::kMaxIons);

/// Overlap with the closest maximally entangled state, optimized over phi.
double max_entangled_overlap(const Register &r);

/// Purity of the reduced state of one ion.
double single_ion_purity(const Register &r, int ion);

}  // namespace iontrap

#endif
