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

#ifndef IONTRAP_QUANTUM_CORE_HPP
#define IONTRAP_QUANTUM_CORE_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "iontrap/errors.hpp"

namespace iontrap {

using cplx = std::complex<double>;

enum class Spin : int { Down = 0, Up = 1 };

/// Spin (x) truncated Fock amplitudes. Basis index 2n + s, s = 0 for down.
/// Up lies above down in energy.
struct QuantumState {
  Eigen::VectorXcd amp;
  int n_max = 0;

  int dim() const { return 2 * (n_max + 1); }
  static int idx(Spin s, int n) { return 2 * n + static_cast<int>(s); }
  cplx &at(Spin s, int n) { return amp[idx(s, n)]; }
  cplx at(Spin s, int n) const { return amp[idx(s, n)]; }
};

/// Motional density matrix over Fock levels 0..n_max.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  int n_max() const { return static_cast<int>(rho.rows()) - 1; }
};

QuantumState fock_state(Spin s, int n, int n_max);
QuantumState coherent_state(cplx alpha, int n_max, Spin s = Spin::Down, const TruncationGuard &guard = {});
DensityMatrix thermal_state(double nbar, int n_max, const TruncationGuard &guard = {});
DensityMatrix fock_density(int n, int n_max);

/// Thermal occupation probabilities, normalized over 0..n_max.
std::vector<double> thermal_distribution(double nbar, int n_max);

/// Applies U in place. DimensionError on shape mismatch.
void apply_unitary(QuantumState &state, const Eigen::MatrixXcd &U);
cplx overlap(const QuantumState &a, const QuantumState &b);
/// |c|^2 in basis order.
std::vector<double> populations(const QuantumState &s);
double spin_population(const QuantumState &s, Spin spin);
std::vector<double> fock_populations(const QuantumState &s);
/// Population in the two highest Fock levels.
double tail_population(const QuantumState &s);
double tail_population(const DensityMatrix &d);

/// Probability of detecting no photon when n_d are expected.
double detection_false_negative(double n_d);

}  // namespace iontrap

#endif
