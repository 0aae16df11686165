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

#include "iontrap/register.hpp"

#include <cmath>
#include <string>

namespace iontrap {

using constants::pi;

Register::Register(int L, int n_bus, int max_ions) : L_(L), n_bus_(n_bus) {
  if (L < 1 || L > max_ions)
    throw RegisterSizeError("register of " + std::to_string(L) + " ions exceeds the cap of " +
                            std::to_string(max_ions));
  if (n_bus < 1) throw DimensionError("register: bus needs at least levels 0 and 1");
  amp_ = Eigen::VectorXcd::Zero((1 << L_) * (n_bus_ + 1));
  reset();
}

void Register::reset() { set_basis(0, 0); }

void Register::set_basis(unsigned spins, int n) {
  if (spins >= (1u << L_) || n < 0 || n > n_bus_) throw DimensionError("register: basis state out of range");
  amp_.setZero();
  amp_[index(spins, n)] = 1.0;
}

void Register::check_ion(int ion) const {
  if (ion < 0 || ion >= L_) throw DimensionError("register: ion index " + std::to_string(ion) + " out of range");
}

void Register::carrier(int ion, double theta, double phi) {
  check_ion(ion);
  Eigen::Matrix2cd R = rotation(theta, phi);
  unsigned bit = 1u << ion;
  for (int n = 0; n <= n_bus_; ++n)
    for (unsigned s = 0; s < (1u << L_); ++s) {
      if (s & bit) continue;
      int d = index(s, n), u = index(s | bit, n);
      cplx cd = amp_[d], cu = amp_[u];
      amp_[d] = R(0, 0) * cd + R(0, 1) * cu;
      amp_[u] = R(1, 0) * cd + R(1, 1) * cu;
    }
}

void Register::red_sideband(int ion, double theta, double phi) {
  check_ion(ion);
  // Equal coupling on every pair; the Rabi frequency only sets the time scale.
  Eigen::Matrix2cd M = two_level_rotation(theta, phi, 0.0, 1.0, 1);
  unsigned bit = 1u << ion;
  for (int n = 1; n <= n_bus_; ++n)
    for (unsigned s = 0; s < (1u << L_); ++s) {
      if (s & bit) continue;
      int u = index(s | bit, n - 1), d = index(s, n);
      cplx cu = amp_[u], cd = amp_[d];
      amp_[u] = M(0, 0) * cu + M(0, 1) * cd;
      amp_[d] = M(1, 0) * cu + M(1, 1) * cd;
    }
}

void Register::bus_cn(int ion) {
  check_ion(ion);
  carrier(ion, pi / 2, pi / 2);
  // Ideal 2 pi excursion |up, 1> -> |aux, 0> -> -|up, 1>.
  unsigned bit = 1u << ion;
  for (unsigned s = 0; s < (1u << L_); ++s)
    if (s & bit) amp_[index(s, 1)] *= -1.0;
  carrier(ion, pi / 2, pi / 2 + pi);
}

double Register::bus_excited_population() const {
  return amp_.tail(amp_.size() - (1 << L_)).squaredNorm();
}

void cn_between_ions(Register &r, int c, int t) {
  if (c == t) throw DimensionError("cn_between_ions: control and target must differ");
  double p = r.bus_excited_population();
  if (p > 1e-12) throw BusNotGroundError("cn_between_ions: bus population " + std::to_string(p) + " outside |0>");
  r.red_sideband(c, pi, 0.0);
  r.bus_cn(t);
  r.red_sideband(c, pi, pi);
}

GateReport cn_between_ions_report(int L, int c, int t) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(4, 4);
  double leak = 0;
  unsigned bc = 1u << c, bt = 1u << t;
  unsigned basis[4] = {0u, bt, bc, bc | bt};
  for (int j = 0; j < 4; ++j) {
    Register r(L);
    r.set_basis(basis[j], 0);
    cn_between_ions(r, c, t);
    for (int i = 0; i < 4; ++i) U(i, j) = r.amplitudes()[basis[i]];
    leak = std::max(leak, 1.0 - U.col(j).squaredNorm());
  }
  GateReport rep;
  rep.unitary = U;
  rep.truth_table = U.cwiseAbs2();
  double f = 0;
  Eigen::Matrix4cd ideal = ideal_cn();
  for (int j = 0; j < 4; ++j) f += std::norm(ideal.col(j).dot(U.col(j)));
  rep.fidelity_vs_ideal = f / 4.0;
  rep.leakage = leak;
  return rep;
}

Register prepare_max_entangled(int L, int max_ions) {
  if (L < 2) throw RegisterSizeError("prepare_max_entangled: need at least two ions");
  Register r(L, 1, max_ions);
  r.carrier(0, pi / 2, -pi / 2);
  for (int i = 1; i < L; ++i) cn_between_ions(r, 0, i);
  return r;
}

double max_entangled_overlap(const Register &r) {
  unsigned all = (1u << r.ions()) - 1u;
  double a = std::abs(r.amplitudes()[0]), b = std::abs(r.amplitudes()[all]);
  return 0.5 * (a + b) * (a + b);
}

double single_ion_purity(const Register &r, int ion) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  unsigned bit = 1u << ion;
  const auto &a = r.amplitudes();
  int block = 1 << r.ions();
  for (int n = 0; n < r.bus_levels(); ++n)
    for (unsigned s = 0; s < static_cast<unsigned>(block); ++s) {
      if (s & bit) continue;
      cplx d = a[s + block * n], u = a[(s | bit) + block * n];
      rho(0, 0) += d * std::conj(d);
      rho(0, 1) += d * std::conj(u);
      rho(1, 0) += u * std::conj(d);
      rho(1, 1) += u * std::conj(u);
    }
  return (rho * rho).trace().real();
}

}  // namespace iontrap
