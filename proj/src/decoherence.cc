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

#include "iontrap/decoherence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "iontrap/constants.hpp"
#include "iontrap/pulse_engine.hpp"

namespace iontrap {

using constants::pi;

Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd &rho, const BathParams &b) {
  const int N = static_cast<int>(rho.rows());
  const double g = b.gamma, nb = b.nbar;
  Eigen::MatrixXcd d(N, N);
  auto aad = [N](int n) { return n < N - 1 ? n + 1.0 : 0.0; };
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < N; ++m) {
      cplx v = -0.5 * g * ((nb + 1.0) * (m + n) + nb * (aad(m) + aad(n))) * rho(m, n);
      if (m + 1 < N && n + 1 < N) v += g * (nb + 1.0) * std::sqrt((m + 1.0) * (n + 1.0)) * rho(m + 1, n + 1);
      if (m > 0 && n > 0) v += g * nb * std::sqrt(static_cast<double>(m) * n) * rho(m - 1, n - 1);
      d(m, n) = v;
    }
  }
  return d;
}

double master_max_step(const BathParams &b, int n_max) {
  if (b.gamma <= 0) return std::numeric_limits<double>::infinity();
  return 0.01 / (b.gamma * (b.nbar + 1.0) * (n_max + 1.0));
}

DensityMatrix master_equation_evolve(const DensityMatrix &rho, const BathParams &b, double t, double dt,
                                     const TruncationGuard &guard,
                                     const std::function<void(double, const Eigen::MatrixXcd &)> &observer) {
  if (b.gamma < 0 || b.nbar < 0) throw RangeError("master equation: gamma and nbar must be >= 0");
  if (!(dt > 0) || t < 0) throw RangeError("master equation: need dt > 0 and t >= 0");
  double limit = master_max_step(b, rho.n_max());
  if (dt > limit)
    throw StiffnessError("master equation: dt = " + std::to_string(dt) + " exceeds the stability bound " +
                         std::to_string(limit));
  DensityMatrix out = rho;
  if (t == 0) return out;
  long steps = static_cast<long>(std::ceil(t / dt - 1e-12));
  double h = t / steps;
  Eigen::MatrixXcd &r = out.rho;
  for (long s = 0; s < steps; ++s) {
    Eigen::MatrixXcd k1 = master_rhs(r, b);
    Eigen::MatrixXcd k2 = master_rhs(r + 0.5 * h * k1, b);
    Eigen::MatrixXcd k3 = master_rhs(r + 0.5 * h * k2, b);
    Eigen::MatrixXcd k4 = master_rhs(r + h * k3, b);
    r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    r = 0.5 * (r + r.adjoint()).eval();
    if (observer) observer((s + 1) * h, r);
  }
  guard.check(tail_population(out), "master_equation_evolve");
  return out;
}

double mean_n(const DensityMatrix &rho) {
  double m = 0;
  for (int n = 0; n <= rho.n_max(); ++n) m += n * rho.rho(n, n).real();
  return m;
}

double mean_n_evolution(double n0, const BathParams &b, double t) {
  return b.nbar + (n0 - b.nbar) * std::exp(-b.gamma * t);
}

std::vector<double> decay_constants(int count, double gamma0, const std::optional<std::vector<double>> &gamma_n) {
  std::vector<double> g(count);
  for (int n = 0; n < count; ++n) {
    if (gamma_n && n < static_cast<int>(gamma_n->size()))
      g[n] = (*gamma_n)[n];
    else
      g[n] = gamma0 * std::sqrt(n + 1.0);
  }
  return g;
}

RabiSignal rabi_decay_signal(const std::vector<double> &P, double gamma0, const CouplingParams &c,
                             const std::vector<double> &tau, const std::optional<std::vector<double>> &gamma_n) {
  double sum = 0;
  for (double p : P) {
    if (p < 0) throw RangeError("rabi_decay_signal: negative population");
    sum += p;
  }
  if (sum > 1.0 + 1e-9) throw RangeError("rabi_decay_signal: populations sum above one");
  auto g = decay_constants(static_cast<int>(P.size()), gamma0, gamma_n);
  RabiSignal s;
  s.tau = tau;
  s.P_down.reserve(tau.size());
  for (double t : tau) {
    double acc = 0;
    for (size_t n = 0; n < P.size(); ++n) {
      double w = rabi_frequency(static_cast<int>(n) + 1, static_cast<int>(n), c);
      acc += P[n] * std::exp(-g[n] * t) * std::cos(2.0 * w * t);
    }
    s.P_down.push_back(0.5 * (1.0 + acc));
  }
  return s;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, int max_iter) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff()) * n;
  auto solve_passive = [&](Eigen::VectorXd &z) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), idx.size());
    for (size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
    Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    z.setZero(n);
    for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
  };
  for (int outer = 0; outer < max_iter; ++outer) {
    Eigen::VectorXd w = A.transpose() * (b - A * x);
    int jmax = -1;
    double wmax = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        jmax = j;
      }
    if (jmax < 0) break;
    passive[jmax] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner < max_iter; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (int j = 0; j < n; ++j)
        if (passive[j] && x[j] <= tol) {
          passive[j] = false;
          x[j] = 0;
        }
    }
    x = z;
  }
  return x;
}

PopulationEstimate invert_populations(const RabiSignal &sig, const CouplingParams &c, int n_cut, double gamma0,
                                      const std::optional<std::vector<double>> &gamma_n) {
  const int K = n_cut + 1, M = static_cast<int>(sig.tau.size());
  if (M != static_cast<int>(sig.P_down.size()) || M < K) throw DimensionError("invert_populations: bad signal size");
  std::vector<double> w(K);
  for (int n = 0; n < K; ++n) w[n] = std::abs(rabi_frequency(n + 1, n, c));
  double tau_max = *std::max_element(sig.tau.begin(), sig.tau.end());
  for (int n = 1; n < K; ++n)
    if (std::abs(w[n] - w[n - 1]) < 2.0 * pi / tau_max)
      throw IllConditionedError("invert_populations: Omega_{" + std::to_string(n + 1) + "," + std::to_string(n) +
                                "} and its neighbour differ by less than 2 pi / tau_max");
  double wmax = *std::max_element(w.begin(), w.end());
  for (int i = 1; i < M; ++i)
    if (sig.tau[i] - sig.tau[i - 1] > pi / (2.0 * wmax))
      throw IllConditionedError("invert_populations: sampling interval violates the Nyquist limit");
  auto g = decay_constants(K, gamma0, gamma_n);
  Eigen::MatrixXd A(M, K);
  Eigen::VectorXd y(M);
  for (int i = 0; i < M; ++i) {
    y[i] = sig.P_down[i] - 0.5;
    for (int n = 0; n < K; ++n) A(i, n) = 0.5 * std::exp(-g[n] * sig.tau[i]) * std::cos(2.0 * w[n] * sig.tau[i]);
  }
  Eigen::VectorXd x = nnls(A, y);
  double sum = x.sum();
  if (sum > 1.0) x /= sum;
  PopulationEstimate est;
  est.P.assign(x.data(), x.data() + K);
  est.residual = std::sqrt((A * x - y).squaredNorm() / M);
  est.P_fourier.resize(K);
  for (int n = 0; n < K; ++n) est.P_fourier[n] = A.col(n).dot(y) / A.col(n).squaredNorm();
  return est;
}

namespace {

struct RabiFunctor : Eigen::DenseFunctor<double> {
  const RabiSignal &s;
  explicit RabiFunctor(const RabiSignal &sig) : Eigen::DenseFunctor<double>(2, static_cast<int>(sig.tau.size())), s(sig) {}
  int operator()(const InputType &x, ValueType &f) const {
    for (int i = 0; i < values(); ++i)
      f[i] = 0.5 * (1.0 + std::exp(-x[0] * s.tau[i]) * std::cos(2.0 * x[1] * s.tau[i])) - s.P_down[i];
    return 0;
  }
  int df(const InputType &x, JacobianType &J) const {
    for (int i = 0; i < values(); ++i) {
      double t = s.tau[i], e = std::exp(-x[0] * t);
      J(i, 0) = -0.5 * t * e * std::cos(2.0 * x[1] * t);
      J(i, 1) = -t * e * std::sin(2.0 * x[1] * t);
    }
    return 0;
  }
};

}  // namespace

RabiFit fit_rabi_decay(const RabiSignal &sig, std::optional<double> Omega_guess) {
  const int M = static_cast<int>(sig.tau.size());
  if (M < 4) throw DimensionError("fit_rabi_decay: need at least four samples");
  double tau_max = sig.tau.back(), dtau = sig.tau[1] - sig.tau[0];
  double w0;
  if (Omega_guess) {
    w0 = *Omega_guess;
  } else {
    // Matched-filter scan up to the Nyquist frequency.
    double best = -1;
    w0 = pi / (2.0 * tau_max);
    const int grid = 4000;
    for (int k = 1; k <= grid; ++k) {
      double w = (pi / (2.0 * dtau)) * k / grid;
      double cs = 0, sn = 0;
      for (int i = 0; i < M; ++i) {
        cs += (sig.P_down[i] - 0.5) * std::cos(2.0 * w * sig.tau[i]);
        sn += (sig.P_down[i] - 0.5) * std::sin(2.0 * w * sig.tau[i]);
      }
      double pw = cs * cs + sn * sn;
      if (pw > best) {
        best = pw;
        w0 = w;
      }
    }
  }
  RabiFunctor f(sig);
  Eigen::LevenbergMarquardt<RabiFunctor> lm(f);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  Eigen::VectorXd x(2);
  x << 1.0 / tau_max, w0;
  lm.minimize(x);
  Eigen::VectorXd r(M);
  f(x, r);
  return {x[0], std::abs(x[1]), std::sqrt(r.squaredNorm() / M)};
}

std::vector<double> slow_amplitude_noise_envelope(NoiseDistribution d, double dOmega, const std::vector<double> &tau,
                                                  double Omega0) {
  if (dOmega < 0) throw RangeError("slow_amplitude_noise_envelope: dOmega must be >= 0");
  std::vector<double> out;
  out.reserve(tau.size());
  for (double t : tau) {
    double x = dOmega * t;
    double env = d == NoiseDistribution::Gaussian ? std::exp(-2.0 * x * x) : 1.0 / (1.0 + 2.0 * x * x);
    out.push_back(0.5 * (1.0 + std::cos(2.0 * Omega0 * t) * env));
  }
  return out;
}

FastNoise fast_amplitude_noise_visibility(double dOmega, double omega_amp, const std::vector<double> &tau,
                                          double Omega0) {
  double r = dOmega / omega_amp;
  if (!(std::abs(r) <= 0.3)) throw RangeError("fast_amplitude_noise_visibility: |dOmega/omega_amp| above 0.3");
  FastNoise out;
  const int Q = 256;
  for (double t : tau) {
    double c = std::cos(omega_amp * t), s = std::sin(omega_amp * t);
    out.closed_form.push_back(0.5 + 0.5 * std::cos(2.0 * Omega0 * t) * (1.0 - 2.0 * r * r * (1.0 - c)));
    double acc = 0;
    for (int j = 0; j < Q; ++j) {
      double ph = 2.0 * pi * j / Q;
      acc += 0.5 * (1.0 + std::cos(2.0 * Omega0 * t + 2.0 * r * (std::cos(ph) * (1.0 - c) + std::sin(ph) * s)));
    }
    out.exact.push_back(acc / Q);
  }
  return out;
}

StarkNoise stark_phase_noise_ratio(double g1, double g2, double eta, double Delta_R, bool correlated) {
  if (Delta_R == 0) throw RangeError("stark_phase_noise_ratio: Delta_R must be nonzero");
  StarkNoise s{};
  s.omega_s = -(g2 * g2 - g1 * g1) / Delta_R;
  const double inf = std::numeric_limits<double>::infinity();
  if (g1 == 0 || g2 == 0 || eta == 0) {
    s.ratio = inf;
    return s;
  }
  if (correlated) {
    double Omega = eta * g1 * g2 / Delta_R;
    s.ratio = s.omega_s * s.omega_s / (4.0 * Omega * Omega);
  } else {
    s.ratio = (std::pow(g1, 4) + std::pow(g2, 4)) / (2.0 * eta * eta * g1 * g1 * g2 * g2);
  }
  return s;
}

SpectatorResult spectator_leakage(double Omega, double Omega_prime, double Delta, Envelope env, double tau_r,
                                  bool compensate) {
  if (!(Omega > 0) || Delta == 0) throw RangeError("spectator_leakage: need Omega > 0 and Delta != 0");
  if (env != Envelope::Square && !(tau_r > 0)) throw RangeError("spectator_leakage: smooth edges need tau_r > 0");
  double edges = env == Envelope::Square ? 0.0 : env == Envelope::SmoothOnAbruptOff ? 0.5 * tau_r : tau_r;
  double flat = pi / Omega - edges;
  if (flat < 0) throw RangeError("spectator_leakage: ramps longer than the 2 pi pulse");
  double T = flat + (env == Envelope::Square ? 0.0 : env == Envelope::SmoothOnAbruptOff ? tau_r : 2.0 * tau_r);
  auto f = [&](double t) {
    if (env == Envelope::Square) return 1.0;
    if (t < tau_r) return 0.5 * (1.0 - std::cos(pi * t / tau_r));
    if (env == Envelope::Smooth && t > T - tau_r) return 0.5 * (1.0 - std::cos(pi * (T - t) / tau_r));
    return 1.0;
  };
  double delta = compensate ? Omega_prime * Omega_prime / Delta : 0.0;
  double h0 = 0.01 / std::max({std::abs(Delta), Omega, std::abs(Omega_prime)});
  if (tau_r > 0) h0 = std::min(h0, tau_r / 400.0);
  long N = static_cast<long>(std::ceil(T / h0));
  double h = T / N;
  using V = std::array<cplx, 3>;  // down, up, s
  const cplx I1(0, 1);
  auto rhs = [&](double t, const V &c) {
    double e = f(t);
    cplx pd = std::exp(I1 * delta * t), ps = std::exp(I1 * (delta - Delta) * t);
    return V{-I1 * Omega * e * pd * c[1] - I1 * Omega_prime * e * ps * c[2],
             -I1 * Omega * e * std::conj(pd) * c[0], -I1 * Omega_prime * e * std::conj(ps) * c[0]};
  };
  V c{1.0, 0.0, 0.0};
  auto axpy = [](const V &a, double s, const V &b) { return V{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; };
  for (long k = 0; k < N; ++k) {
    double t = k * h;
    V k1 = rhs(t, c);
    V k2 = rhs(t + 0.5 * h, axpy(c, 0.5 * h, k1));
    V k3 = rhs(t + 0.5 * h, axpy(c, 0.5 * h, k2));
    V k4 = rhs(t + h, axpy(c, h, k3));
    for (int i = 0; i < 3; ++i) c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  SpectatorResult r{};
  r.C_s_final = std::abs(c[2]);
  r.C_down_final = std::abs(c[0]);
  r.adiabatic_estimate = std::abs(Omega_prime / Delta) * r.C_down_final;
  r.duration = T;
  return r;
}

BFieldModulation bfield_modulation(double beta0, double omega0, double omega_m, double Omega_nn, int kmax) {
  if (!(omega_m >= 10.0 * std::abs(Omega_nn)))
    throw RangeError("bfield_modulation: averaging needs omega_m >= 10 Omega");
  BFieldModulation b{};
  b.eta_m = omega0 * beta0 / omega_m;
  b.carrier_factor = std::cyl_bessel_j(0.0, std::abs(b.eta_m));
  for (int k = 0; k <= kmax; ++k) {
    double j = std::cyl_bessel_j(static_cast<double>(k), std::abs(b.eta_m));
    b.sidebands.push_back(b.eta_m < 0 && k % 2 ? -j : j);
  }
  return b;
}

Coherence coherence_tomography(const QuantumState &s, const CouplingParams &c) {
  if (spin_population(s, Spin::Up) > 1e-12) throw RangeError("coherence_tomography: input must lie in span{|down, n>}");
  PulseSpec red;
  red.transition = Transition::red(1);
  red.theta = pi;
  red.coupling = c;
  QuantumState mapped = apply_pulse(s, red, TruncationGuard{1.0});
  Coherence out{};
  const double dphi[4] = {0.0, pi / 2, pi, -pi / 2};
  for (int k = 0; k < 4; ++k) {
    PulseSpec car;
    car.transition = Transition::carrier();
    car.theta = pi / 2;
    car.coupling = c;
    car.phi = pi / 2 - dphi[k];
    out.P[k] = spin_population(apply_pulse(mapped, car, TruncationGuard{1.0}), Spin::Down);
  }
  out.rho01 = cplx(0.5 * (out.P[2] - out.P[0]), 0.5 * (out.P[1] - out.P[3]));
  return out;
}

double electric_dipole_rate(double omega0, double dipole) {
  using namespace constants;
  return std::pow(omega0, 3) * dipole * dipole / (3.0 * pi * eps0 * hbar * std::pow(c, 3));
}

double magnetic_dipole_rate(double omega0, double moment) {
  using namespace constants;
  return std::pow(omega0, 3) * moment * moment / (3.0 * pi * eps0 * hbar * std::pow(c, 5));
}

}  // namespace iontrap
