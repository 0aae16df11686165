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

#include "iontrap/quantum_core.hpp"

#include <cmath>
#include <string>

namespace iontrap {

static void check_level(int n, int n_max, const char *where) {
  if (n_max < 0 || n < 0 || n > n_max)
    throw DimensionError(std::string(where) + ": level " + std::to_string(n) + " outside 0.." + std::to_string(n_max));
}

QuantumState fock_state(Spin s, int n, int n_max) {
  check_level(n, n_max, "fock_state");
  QuantumState st;
  st.n_max = n_max;
  st.amp = Eigen::VectorXcd::Zero(st.dim());
  st.at(s, n) = 1.0;
  return st;
}

QuantumState coherent_state(cplx alpha, int n_max, Spin s, const TruncationGuard &guard) {
  check_level(0, n_max, "coherent_state");
  QuantumState st;
  st.n_max = n_max;
  st.amp = Eigen::VectorXcd::Zero(st.dim());
  double a2 = std::norm(alpha);
  // Untruncated Poisson weight that falls outside 0..n_max.
  double kept = 0;
  for (int n = 0; n <= n_max; ++n) {
    double logmag = -0.5 * a2 - 0.5 * std::lgamma(n + 1.0);
    cplx c = std::exp(logmag) * (n == 0 ? cplx(1.0) : std::pow(alpha, n));
    st.at(s, n) = c;
    kept += std::norm(c);
  }
  guard.check(std::max(0.0, 1.0 - kept) + tail_population(st), "coherent_state");
  st.amp /= st.amp.norm();
  return st;
}

std::vector<double> thermal_distribution(double nbar, int n_max) {
  std::vector<double> p(n_max + 1);
  if (nbar <= 0) {
    p.assign(n_max + 1, 0.0);
    p[0] = 1.0;
    return p;
  }
  double r = nbar / (1.0 + nbar), sum = 0;
  for (int n = 0; n <= n_max; ++n) sum += (p[n] = std::pow(r, n) / (1.0 + nbar));
  for (double &x : p) x /= sum;
  return p;
}

DensityMatrix thermal_state(double nbar, int n_max, const TruncationGuard &guard) {
  check_level(0, n_max, "thermal_state");
  if (nbar < 0) throw RangeError("thermal_state: nbar must be >= 0");
  DensityMatrix d;
  d.rho = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  double r = nbar / (1.0 + nbar);
  // Untruncated weight at n >= n_max - 1.
  guard.check(n_max >= 1 ? std::pow(r, n_max - 1) : 1.0, "thermal_state");
  auto p = thermal_distribution(nbar, n_max);
  for (int n = 0; n <= n_max; ++n) d.rho(n, n) = p[n];
  return d;
}

DensityMatrix fock_density(int n, int n_max) {
  check_level(n, n_max, "fock_density");
  DensityMatrix d;
  d.rho = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  d.rho(n, n) = 1.0;
  return d;
}

void apply_unitary(QuantumState &state, const Eigen::MatrixXcd &U) {
  if (U.rows() != state.dim() || U.cols() != state.dim())
    throw DimensionError("apply_unitary: operator is " + std::to_string(U.rows()) + "x" + std::to_string(U.cols()) +
                         ", state has dimension " + std::to_string(state.dim()));
  double dev = (U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw DimensionError("apply_unitary: operator is not unitary");
  state.amp = U * state.amp;
}

cplx overlap(const QuantumState &a, const QuantumState &b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap: dimension mismatch");
  return a.amp.dot(b.amp);
}

std::vector<double> populations(const QuantumState &s) {
  std::vector<double> p(s.dim());
  for (int i = 0; i < s.dim(); ++i) p[i] = std::norm(s.amp[i]);
  return p;
}

double spin_population(const QuantumState &s, Spin spin) {
  double p = 0;
  for (int n = 0; n <= s.n_max; ++n) p += std::norm(s.at(spin, n));
  return p;
}

std::vector<double> fock_populations(const QuantumState &s) {
  std::vector<double> p(s.n_max + 1);
  for (int n = 0; n <= s.n_max; ++n) p[n] = std::norm(s.at(Spin::Down, n)) + std::norm(s.at(Spin::Up, n));
  return p;
}

double tail_population(const QuantumState &s) {
  double p = 0;
  for (int n = std::max(0, s.n_max - 1); n <= s.n_max; ++n)
    p += std::norm(s.at(Spin::Down, n)) + std::norm(s.at(Spin::Up, n));
  return p;
}

double tail_population(const DensityMatrix &d) {
  int nm = d.n_max();
  double p = 0;
  for (int n = std::max(0, nm - 1); n <= nm; ++n) p += d.rho(n, n).real();
  return p;
}

double detection_false_negative(double n_d) {
  if (n_d < 0) throw RangeError("detection_false_negative: n_d must be >= 0");
  return std::exp(-n_d);
}

}  // namespace iontrap
