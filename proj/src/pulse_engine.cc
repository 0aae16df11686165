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

#include "iontrap/pulse_engine.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace iontrap {

using constants::pi;

static const cplx I1(0.0, 1.0);

Eigen::Matrix2cd two_level_evolution(double Omega, double Delta, double phi, int dn, double t) {
  Eigen::Matrix2cd U;
  double X = std::sqrt(Delta * Delta + 4.0 * Omega * Omega);
  if (X == 0.0) return Eigen::Matrix2cd::Identity();
  double c = std::cos(0.5 * X * t), s = std::sin(0.5 * X * t);
  double arg = 0.5 * Delta * t - phi - 0.5 * pi * dn;
  U(0, 0) = std::exp(-I1 * (0.5 * Delta * t)) * (c + I1 * (Delta / X) * s);
  U(0, 1) = -2.0 * I1 * (Omega / X) * std::exp(-I1 * arg) * s;
  U(1, 0) = -2.0 * I1 * (Omega / X) * std::exp(I1 * arg) * s;
  U(1, 1) = std::exp(I1 * (0.5 * Delta * t)) * (c - I1 * (Delta / X) * s);
  return U;
}

Eigen::Matrix2cd two_level_rotation(double theta, double phi, double Delta, double Omega_eff, int dn) {
  if (theta == 0.0) return Eigen::Matrix2cd::Identity();
  if (Omega_eff == 0.0) throw InvalidTransitionError("two_level_rotation: zero coupling for a nonzero area");
  return two_level_evolution(Omega_eff, Delta, phi, dn, theta / (2.0 * std::abs(Omega_eff)));
}

Eigen::Matrix2cd rotation(double theta, double phi) {
  Eigen::Matrix2cd R;
  double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  R << c, -I1 * std::exp(I1 * phi) * s, -I1 * std::exp(-I1 * phi) * s, c;
  return R;
}

static std::pair<int, int> reference_pair(const PulseSpec &p) {
  if (p.reference) return *p.reference;
  switch (p.transition.kind) {
    case TransitionKind::Carrier: return {0, 0};
    case TransitionKind::Blue: return {0, p.transition.order};
    case TransitionKind::Red: return {p.transition.order, 0};
  }
  return {0, 0};
}

static void validate(const PulseSpec &p) {
  if (p.transition.kind == TransitionKind::Carrier) {
    if (p.transition.order != 0) throw InvalidTransitionError("carrier pulse must have order 0");
  } else if (p.transition.order < 1) {
    throw InvalidTransitionError("sideband order must be >= 1");
  }
  if (p.theta < 0) throw InvalidTransitionError("pulse area must be >= 0");
  auto [nd, nu] = reference_pair(p);
  int dn = nu - nd;
  bool ok = (p.transition.kind == TransitionKind::Carrier && dn == 0) ||
            (p.transition.kind == TransitionKind::Blue && dn == p.transition.order) ||
            (p.transition.kind == TransitionKind::Red && dn == -p.transition.order);
  if (!ok || nd < 0 || nu < 0) throw InvalidTransitionError("reference pair does not belong to the named transition");
}

double pulse_duration(const PulseSpec &p) {
  validate(p);
  auto [nd, nu] = reference_pair(p);
  double w = std::abs(rabi_frequency(nu, nd, p.coupling));
  if (w == 0.0) throw InvalidTransitionError("reference pair has zero Rabi frequency");
  return (p.theta + p.zeta) / (2.0 * w);
}

// Lower partner (down level) of up level n', or -1.
static int shift_of(const Transition &tr) {
  switch (tr.kind) {
    case TransitionKind::Carrier: return 0;
    case TransitionKind::Blue: return tr.order;
    case TransitionKind::Red: return -tr.order;
  }
  return 0;
}

Eigen::MatrixXcd pulse_unitary(int n_max, const PulseSpec &p) {
  if (n_max < 0) throw DimensionError("pulse_unitary: n_max must be >= 0");
  validate(p);
  double t = pulse_duration(p);
  int dim = 2 * (n_max + 1);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim, dim);
  int shift = shift_of(p.transition);
  double phi = p.phi + p.phi_err;
  for (int n = 0; n <= n_max; ++n) {
    int nu = n + shift;
    if (nu < 0 || nu > n_max) continue;
    double w = rabi_frequency(nu, n, p.coupling);
    Eigen::Matrix2cd M = two_level_evolution(w, p.Delta, phi, std::abs(shift), t);
    int iu = QuantumState::idx(Spin::Up, nu), id = QuantumState::idx(Spin::Down, n);
    U(iu, iu) = M(0, 0);
    U(iu, id) = M(0, 1);
    U(id, iu) = M(1, 0);
    U(id, id) = M(1, 1);
  }
  return U;
}

QuantumState apply_pulse(const QuantumState &s, const PulseSpec &p, const TruncationGuard &guard) {
  validate(p);
  int shift = shift_of(p.transition);
  if (std::abs(shift) > s.n_max && shift != 0)
    throw InvalidTransitionError("sideband order " + std::to_string(std::abs(shift)) + " exceeds n_max");
  // Population whose partner would lie above n_max.
  double lost = 0;
  if (shift > 0)
    for (int n = s.n_max - shift + 1; n <= s.n_max; ++n) lost += std::norm(s.at(Spin::Down, n));
  if (shift < 0)
    for (int n = s.n_max + shift + 1; n <= s.n_max; ++n) lost += std::norm(s.at(Spin::Up, n));
  if (lost > guard.eps)
    throw TruncationError("apply_pulse: sideband would drive population " + std::to_string(lost) +
                          " above n_max = " + std::to_string(s.n_max));
  QuantumState out = s;
  out.amp = pulse_unitary(s.n_max, p) * s.amp;
  guard.check(tail_population(out), "apply_pulse");
  return out;
}

Eigen::Matrix4cd phase_gate(double phi) {
  Eigen::Matrix4cd U = Eigen::Matrix4cd::Identity();
  U(3, 3) = std::exp(I1 * phi);
  return U;
}

Eigen::Matrix4cd ideal_cn() {
  Eigen::Matrix4cd U = Eigen::Matrix4cd::Zero();
  U(0, 0) = U(1, 1) = U(2, 3) = U(3, 2) = 1.0;
  return U;
}

static GateReport make_report(const Eigen::MatrixXcd &U4, const Eigen::MatrixXcd &ideal, double leakage) {
  GateReport r;
  r.unitary = U4;
  r.truth_table = U4.cwiseAbs2();
  double f = 0;
  for (int j = 0; j < U4.cols(); ++j) f += std::norm(ideal.col(j).dot(U4.col(j)));
  r.fidelity_vs_ideal = f / U4.cols();
  r.leakage = leakage;
  return r;
}

GateReport cn_gate_three_pulse(const CouplingParams &aux, double phi) {
  // Basis {down 0, up 0, down 1, up 1, aux 0, aux 1}.
  Eigen::MatrixXcd P1 = Eigen::MatrixXcd::Identity(6, 6), P2 = P1, P3 = P1;
  Eigen::Matrix2cd r1 = rotation(pi / 2, phi), r3 = rotation(pi / 2, phi + pi);
  for (int b = 0; b < 2; ++b) {
    P1.block(2 * b, 2 * b, 2, 2) = r1;
    P3.block(2 * b, 2 * b, 2, 2) = r3;
  }
  double w = rabi_frequency(0, 1, aux);
  if (w == 0.0) throw InvalidTransitionError("cn_gate_three_pulse: auxiliary transition has zero coupling");
  Eigen::Matrix2cd m = two_level_evolution(w, 0.0, 0.0, 1, 2.0 * pi / (2.0 * std::abs(w)));
  // Pair (aux 0, up 1) in (upper, lower) order.
  P2(4, 4) = m(0, 0);
  P2(4, 3) = m(0, 1);
  P2(3, 4) = m(1, 0);
  P2(3, 3) = m(1, 1);
  Eigen::MatrixXcd U = P3 * P2 * P1;
  double leak = 0;
  for (int j = 0; j < 4; ++j) leak = std::max(leak, U.block(4, j, 2, 1).squaredNorm());
  return make_report(U.topLeftCorner(4, 4), ideal_cn(), leak);
}

Eigen::Matrix4cd single_pulse_target(int k, int m, double phi) {
  Eigen::Matrix4cd U = Eigen::Matrix4cd::Zero();
  double sgn = ((k - m) % 2 == 0) ? 1.0 : -1.0;
  U(0, 0) = U(1, 1) = 1.0;
  U(2, 3) = I1 * std::exp(I1 * phi) * sgn;
  U(3, 2) = I1 * std::exp(-I1 * phi) * sgn;
  return U;
}

GateReport cn_gate_single_pulse_at(int k, [[maybe_unused]] int m, double eta, double phi) {
  PulseSpec p;
  p.transition = Transition::carrier();
  p.coupling = {1.0, eta};
  p.reference = std::make_pair(1, 1);
  p.theta = 2.0 * (k + 0.5) * pi;
  // Field phase chosen so the n=1 block reads i e^{+-i phi}(-1)^(k-m).
  p.phi = pi - phi;
  Eigen::MatrixXcd U = pulse_unitary(1, p);
  cplx g = U(0, 0);
  if (std::abs(g) > 0) U /= (g / std::abs(g));
  return make_report(U, ideal_cn(), 0.0);
}

GateReport cn_gate_single_pulse(int k, int m, double eta, double phi) {
  if (m <= k || k < 0) throw MagicEtaError("cn_gate_single_pulse: need m > k >= 0");
  double target = (2.0 * k + 1.0) / (2.0 * m);
  double miss = std::abs(laguerre(1, 0.0, eta * eta) - target);
  if (miss > 1e-10)
    throw MagicEtaError("cn_gate_single_pulse: eta = " + std::to_string(eta) + " is not a magic value for (k, m) = (" +
                        std::to_string(k) + ", " + std::to_string(m) + ")");
  return cn_gate_single_pulse_at(k, m, eta, phi);
}

Eigen::MatrixXcd displacement_operator(cplx alpha, int n_max) {
  int N = n_max + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd G = alpha * a.adjoint() - std::conj(alpha) * a;
  Eigen::MatrixXcd H = I1 * G;
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::VectorXcd ph = (-I1 * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumState displacement_drive(const QuantumState &s, cplx Omega1, double t, const TruncationGuard &guard) {
  Eigen::MatrixXcd D = displacement_operator(Omega1 * t, s.n_max);
  QuantumState out = s;
  for (int spin = 0; spin < 2; ++spin) {
    Eigen::VectorXcd v(s.n_max + 1);
    for (int n = 0; n <= s.n_max; ++n) v[n] = s.amp[2 * n + spin];
    v = D * v;
    for (int n = 0; n <= s.n_max; ++n) out.amp[2 * n + spin] = v[n];
  }
  guard.check(tail_population(out), "displacement_drive");
  return out;
}

double worst_case_fidelity(const Eigen::Matrix2cd &V) {
  double c = std::abs(V.trace()) / 2.0;
  return std::min(1.0, c * c);
}

SequenceFidelity noisy_sequence_fidelity(const std::vector<PulseSpec> &seq, const ErrorModel &model, int trials,
                                         unsigned long long base_seed) {
  if (trials < 1) throw RangeError("noisy_sequence_fidelity: trials must be >= 1");
  SequenceFidelity out{};
  out.per_trial.reserve(trials);
  for (int tr = 0; tr < trials; ++tr) {
    std::mt19937_64 rng(base_seed + static_cast<unsigned long long>(tr));
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::Matrix2cd ideal = Eigen::Matrix2cd::Identity(), actual = ideal;
    for (const PulseSpec &p : seq) {
      double z = model.systematic ? model.zeta_rms : model.zeta_rms * nd(rng);
      double f = model.systematic ? model.phi_rms : model.phi_rms * nd(rng);
      ideal = rotation(p.theta, p.phi) * ideal;
      actual = rotation(p.theta + p.zeta + z, p.phi + p.phi_err + f) * actual;
    }
    out.per_trial.push_back(worst_case_fidelity(ideal.adjoint() * actual));
  }
  double n = static_cast<double>(trials);
  out.F_mean = std::accumulate(out.per_trial.begin(), out.per_trial.end(), 0.0) / n;
  double var = 0;
  for (double f : out.per_trial) var += (f - out.F_mean) * (f - out.F_mean);
  out.F_std = trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  double M = static_cast<double>(seq.size());
  double denom = model.systematic ? std::pow(M * model.zeta_rms, 2) : M * model.zeta_rms * model.zeta_rms;
  out.coefficient = denom > 0 ? (1.0 - out.F_mean) / denom : 0.0;
  return out;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionError("loglog_slope: need two or more matching points");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double PhaseLedger::phase_of(int ion) const {
  auto it = phase.find(ion);
  return it == phase.end() ? 0.0 : it->second;
}

void phase_ledger_advance(PhaseLedger &ledger, int ion, double t_start, const std::vector<DetuningSegment> &profile) {
  auto it = ledger.time.find(ion);
  if (it != ledger.time.end() && t_start < it->second)
    throw TimeOrderError("phase ledger: ion " + std::to_string(ion) + " advanced from t = " + std::to_string(t_start) +
                         " before its last recorded time " + std::to_string(it->second));
  double t = t_start, ph = ledger.phase_of(ion);
  for (const auto &seg : profile) {
    if (seg.duration < 0) throw TimeOrderError("phase ledger: negative segment duration");
    ph += seg.Delta * seg.duration;
    t += seg.duration;
  }
  ledger.phase[ion] = ph;
  ledger.time[ion] = t;
}

}  // namespace iontrap
