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

#include "iontrap/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"

namespace iontrap {

double laguerre(int n, double alpha, double x) {
  if (n < 0) return 0.0;
  double l0 = 1.0;
  if (n == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double rabi_frequency(int n1, int n2, const CouplingParams &c, RabiMode mode) {
  if (n1 < 0 || n2 < 0) throw RangeError("rabi_frequency: Fock levels must be >= 0");
  int lo = std::min(n1, n2), hi = std::max(n1, n2), d = hi - lo;
  double eta = c.eta;
  if (mode == RabiMode::LambDicke) {
    return c.Omega * std::pow(eta, d) * std::exp(0.5 * (std::lgamma(hi + 1.0) - std::lgamma(lo + 1.0)) -
                                                 std::lgamma(d + 1.0));
  }
  double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)));
  return c.Omega * std::exp(-0.5 * eta * eta) * ratio * std::pow(eta, d) * laguerre(lo, d, eta * eta);
}

std::vector<double> magic_eta(int level_n, int k, int m, bool reciprocal) {
  if (level_n < 1 || k < 0 || m <= k) throw NoRootError("magic_eta: need level_n >= 1 and m > k >= 0");
  double target = reciprocal ? (2.0 * m) / (2.0 * k + 1.0) : (2.0 * k + 1.0) / (2.0 * m);
  auto f = [&](double eta) { return laguerre(level_n, 0.0, eta * eta) - target; };
  std::vector<double> roots;
  const int grid = 4000;
  double x0 = 1e-9, f0 = f(x0);
  for (int i = 1; i <= grid; ++i) {
    double x1 = static_cast<double>(i) / grid * (1.0 - 1e-12);
    double f1 = f(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if ((f0 < 0) != (f1 < 0) && f0 != 0.0) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        double mid = 0.5 * (a + b), fm = f(mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  if (roots.empty())
    throw NoRootError("magic_eta: L_" + std::to_string(level_n) + "(eta^2) = " + std::to_string(target) +
                      " has no root with 0 < eta < 1");
  return roots;
}

DebyeWallerStats debye_waller_stats(const ModeEnsemble &e, double eps) {
  if (e.eta.size() != e.nbar.size()) throw DimensionError("debye_waller_stats: eta and nbar lengths differ");
  double log_mean = 0, log_i0 = 0, sum4 = 0;
  for (size_t p = 0; p < e.eta.size(); ++p) {
    if (static_cast<int>(p) == e.logic_mode) continue;
    double eta2 = e.eta[p] * e.eta[p], nb = e.nbar[p];
    if (eta2 < 0 || nb < 0) throw RangeError("debye_waller_stats: eta and nbar must be >= 0");
    log_mean += -eta2 * (nb + 0.5);
    log_i0 += std::log(std::cyl_bessel_i(0.0, 2.0 * eta2 * std::sqrt(nb * (nb + 1.0))));
    sum4 += eta2 * eta2 * nb * (nb + 1.0);
  }
  DebyeWallerStats s{};
  s.mean_factor = std::exp(log_mean);
  s.rms_exact = std::sqrt(std::max(0.0, std::expm1(log_i0)));
  s.rms_approx = std::sqrt(sum4);
  s.prob_within = s.rms_approx > 0 ? std::erf(eps / (std::sqrt(2.0) * s.rms_approx)) : 1.0;
  return s;
}

StandingWave standing_wave_coefficients(const std::vector<double> &k, Parity parity, double eta) {
  const int M = static_cast<int>(k.size());
  if (M < 1) throw SingularSystemError("standing_wave_coefficients: empty k list");
  if (k[0] == 0) throw SingularSystemError("standing_wave_coefficients: k_1 must be nonzero");
  // Work in x_m = k_m / k_1 to keep powers of order one.
  std::vector<double> x(M);
  for (int m = 0; m < M; ++m) x[m] = k[m] / k[0];
  for (int a = 0; a < M; ++a)
    for (int b = a + 1; b < M; ++b)
      if (std::abs(std::abs(x[a]) - std::abs(x[b])) < 1e-12)
        throw SingularSystemError("standing_wave_coefficients: repeated |k| values");
  Eigen::MatrixXd A(M, M);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M);
  for (int m = 0; m < M; ++m) A(0, m) = parity == Parity::Sine ? x[m] : 1.0;
  rhs[0] = 1.0;
  for (int r = 1; r < M; ++r) {
    int n = parity == Parity::Sine ? 2 * r + 1 : 2 * r;
    for (int m = 0; m < M; ++m) A(r, m) = std::pow(x[m], n);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() < M) throw SingularSystemError("standing_wave_coefficients: constraint matrix is singular");
  Eigen::VectorXd C = lu.solve(rhs);
  StandingWave sw;
  sw.C.assign(C.data(), C.data() + M);
  sw.suppression = std::pow(eta, 2 * M);
  return sw;
}

double standing_wave_matrix_element(int n1, int n2, double eta, const std::vector<double> &k,
                                    const std::vector<double> &C, Parity parity) {
  if (k.size() != C.size() || k.empty()) throw DimensionError("standing_wave_matrix_element: k and C lengths differ");
  int d = std::abs(n1 - n2);
  // <n1|exp(+-i eta X)|n2> carries (+-i)^d; sin keeps odd d, cos keeps even d.
  double phase;
  if (parity == Parity::Sine) {
    if (d % 2 == 0) return 0.0;
    phase = (d % 4 == 1) ? 1.0 : -1.0;
  } else {
    if (d % 2 == 1) return 0.0;
    phase = (d % 4 == 0) ? 1.0 : -1.0;
  }
  double sum = 0;
  for (size_t m = 0; m < k.size(); ++m) {
    double em = eta * k[m] / k[0];
    sum += C[m] * rabi_frequency(n1, n2, {1.0, std::abs(em)}) * (em < 0 && d % 2 == 1 ? -1.0 : 1.0);
  }
  return phase * sum;
}

SpontaneousEmission spontaneous_emission_ratio(double Gamma_s, double Omega1, double eta, double Delta,
                                               double kappa) {
  if (!(Omega1 > 0) || !(Delta > 0)) throw RangeError("spontaneous_emission_ratio: Omega1 and Delta must be positive");
  double zeta = std::pow(Omega1 / (eta * Delta), 2);
  SpontaneousEmission s{};
  s.xi = Gamma_s / (2.0 * Omega1) * (kappa + zeta / kappa);
  s.kappa_opt = std::sqrt(zeta);
  s.xi_opt = Gamma_s * s.kappa_opt / Omega1;
  return s;
}

double raman_spontaneous_ratio(double Gamma, double Delta_R) { return Gamma / Delta_R; }

Crosstalk beam_crosstalk(double w0, double r) {
  if (!(w0 > 0)) throw RangeError("beam_crosstalk: waist must be positive");
  double I = std::exp(-2.0 * r * r / (w0 * w0));
  return {I, std::sqrt(I)};
}

StarkAddressing stark_addressing_epsilon(double theta, int m) {
  if (!(theta > 0) || m < 1) throw NoRootError("stark_addressing_epsilon: need theta > 0 and m >= 1");
  double b = 1.0 + std::pow(2.0 * m * constants::pi / theta, 2);
  double disc = b * b - 4.0;
  if (disc <= 0) throw NoRootError("stark_addressing_epsilon: no root in (0, 1)");
  // Smaller root written to avoid cancellation.
  double eps = 2.0 / (b + std::sqrt(disc));
  if (!(eps > 0 && eps < 1)) throw NoRootError("stark_addressing_epsilon: no root in (0, 1)");
  double xi = std::fmod(theta * (1.0 - eps) / std::sqrt(eps), constants::two_pi);
  return {eps, xi};
}

double shot_noise_floor(double P, double tau_op, double wavelength, double eta_det, double eps_split) {
  if (!(P > 0 && tau_op > 0 && wavelength > 0) || !(eta_det > 0 && eta_det <= 1) || !(eps_split > 0 && eps_split < 1))
    throw RangeError("shot_noise_floor: inputs out of range");
  double photon = constants::h * constants::c / wavelength;
  return std::sqrt(photon / (P * tau_op * eta_det * eps_split * (1.0 - eps_split)));
}

}  // namespace iontrap
