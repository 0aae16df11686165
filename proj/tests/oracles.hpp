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

// Independent reference computations. Nothing here calls into the library.

#ifndef IONTRAP_TESTS_ORACLES_HPP
#define IONTRAP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// exp(i eta (a + a^dagger)) on an N-level truncation.
inline Eigen::MatrixXcd expm_displacement(double eta, int N = 40) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 0; n + 1 < N; ++n) X(n, n + 1) = X(n + 1, n) = std::sqrt(n + 1.0);
  return (cplx(0, eta) * X).exp();
}

inline double expm_rabi(int n1, int n2, double eta, int N = 40) {
  return std::abs(expm_displacement(eta, N)(n1, n2));
}

/// The same element with the i^|n1-n2| phase removed, leaving the signed
/// real factor.
inline double expm_rabi_signed(const Eigen::MatrixXcd &D, int n1, int n2) {
  cplx ph = std::pow(cplx(0, -1), std::abs(n1 - n2));
  return (D(n1, n2) * ph).real();
}

/// Characteristic exponent of x'' + (a - 2 q cos 2t) x = 0 from the
/// monodromy matrix over one period, by RK4.
inline double mathieu_beta_floquet(double a, double q, int steps = 20000) {
  auto rhs = [&](double t, const Eigen::Vector2d &y) {
    return Eigen::Vector2d(y[1], -(a - 2.0 * q * std::cos(2.0 * t)) * y[0]);
  };
  auto run = [&](Eigen::Vector2d y) {
    double h = pi / steps;
    for (int k = 0; k < steps; ++k) {
      double t = k * h;
      Eigen::Vector2d k1 = rhs(t, y), k2 = rhs(t + h / 2, y + h / 2 * k1), k3 = rhs(t + h / 2, y + h / 2 * k2),
                      k4 = rhs(t + h, y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return y;
  };
  Eigen::Vector2d y1 = run({1, 0}), y2 = run({0, 1});
  double half_trace = 0.5 * (y1[0] + y2[1]);
  return std::acos(std::clamp(half_trace, -1.0, 1.0)) / pi;
}

/// RK4 of the interaction-picture two-level equations
///   dC_up/dt   = -i Omega e^{i psi} e^{-i Delta t} C_down
///   dC_down/dt = -i Omega e^{-i psi} e^{+i Delta t} C_up
/// with psi = phi + pi dn / 2. Returns the 2x2 propagator in (up, down).
inline Eigen::Matrix2cd rk4_two_level(double Omega, double Delta, double phi, int dn, double t, int steps = 20000) {
  const cplx I(0, 1);
  double psi = phi + pi * dn / 2.0;
  auto rhs = [&](double s, const Eigen::Vector2cd &c) {
    return Eigen::Vector2cd(-I * Omega * std::exp(I * (psi - Delta * s)) * c[1],
                            -I * Omega * std::exp(-I * (psi - Delta * s)) * c[0]);
  };
  Eigen::Matrix2cd U;
  for (int col = 0; col < 2; ++col) {
    Eigen::Vector2cd c = Eigen::Vector2cd::Zero();
    c[col] = 1.0;
    double h = t / steps;
    for (int k = 0; k < steps; ++k) {
      double s = k * h;
      Eigen::Vector2cd k1 = rhs(s, c), k2 = rhs(s + h / 2, c + h / 2 * k1), k3 = rhs(s + h / 2, c + h / 2 * k2),
                       k4 = rhs(s + h, c + h * k3);
      c += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    U.col(col) = c;
  }
  return U;
}

/// Bisection root of f on [lo, hi] (f must change sign).
inline double bisect(const std::function<double(double)> &f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Mean of sin^2(w t) for t uniform in [a, b].
inline double mean_sin2(double w, double a, double b) {
  if (w == 0) return 0.0;
  return 0.5 - (std::sin(2 * w * b) - std::sin(2 * w * a)) / (4 * w * (b - a));
}

/// Expected Fock distribution after sideband cooling with the per-cycle
/// transfer probabilities p[n] and single-quantum recoil eps per scattering.
inline std::vector<double> cooling_rate_equation(std::vector<double> P, const std::vector<double> &p, double eps,
                                                 int scatters, int cycles) {
  const size_t N = P.size();
  for (int c = 0; c < cycles; ++c) {
    std::vector<double> moved(N, 0.0), kept = P;
    for (size_t n = 1; n < N; ++n) {
      moved[n - 1] += p[n] * P[n];
      kept[n] -= p[n] * P[n];
    }
    for (int s = 0; s < scatters; ++s) {
      std::vector<double> next(N, 0.0);
      for (size_t n = 0; n < N; ++n) {
        if (n + 1 < N) {
          next[n] += (1 - eps) * moved[n];
          next[n + 1] += eps * moved[n];
        } else {
          next[n] += moved[n];
        }
      }
      moved = next;
    }
    for (size_t n = 0; n < N; ++n) P[n] = kept[n] + moved[n];
  }
  return P;
}

/// Laguerre L_n^alpha(x) from the explicit finite sum.
inline double laguerre_sum(int n, int alpha, double x) {
  double s = 0;
  for (int k = 0; k <= n; ++k)
    s += std::pow(-1.0, k) * std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n - k + 1.0) -
                                      std::lgamma(alpha + k + 1.0) - std::lgamma(k + 1.0)) *
         std::pow(x, k);
  return s;
}

}  // namespace oracle

#endif
