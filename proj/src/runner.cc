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

#include "runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "iontrap/constants.hpp"
#include "iontrap/cooling.hpp"
#include "iontrap/coupling.hpp"
#include "iontrap/decoherence.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/pulse_engine.hpp"
#include "iontrap/quantum_core.hpp"
#include "iontrap/register.hpp"
#include "iontrap/spectroscopy.hpp"
#include "iontrap/trap_model.hpp"

#ifndef IONTRAP_VERSION_STRING
#define IONTRAP_VERSION_STRING "0.0.0"
#endif

namespace iontrap {

using constants::pi;
using constants::two_pi;

bool RunResult::passed() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const Expectation &e) { return e.passed; });
}

double RunResult::metric(const std::string &name) const {
  for (auto &[k, v] : metrics)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct Ctx {
  const Config &c;
  RunResult &r;
  std::uint64_t seed;
  TruncationGuard guard;

  void metric(const std::string &name, double v) { r.metrics.emplace_back(name, v); }
  Table &table(const std::string &name, std::vector<std::string> cols) {
    r.tables.push_back(Table{name, std::move(cols), {}, {}});
    return r.tables.back();
  }
  std::string variant(const std::string &fallback) const { return c.string("variant", fallback); }
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::string tag(double x) {
  std::ostringstream o;
  o << x;
  std::string s = o.str();
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

ConfigError bad_variant(const std::string &kind, const std::string &v, const std::string &allowed) {
  return ConfigError("variant", "unknown variant '" + v + "' for kind '" + kind + "' (one of " + allowed + ")");
}

// ---------------------------------------------------------------- trap

void run_trap(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("secular");
  if (v == "secular") {
    TrapParams p;
    p.mass = c.quantity("mass", Dim::Mass);
    p.charge = c.quantity("charge", Dim::Charge, constants::e);
    p.V0 = c.quantity("V0", Dim::Voltage);
    p.Ur = c.quantity("Ur", Dim::Voltage, 0.0);
    p.U0 = c.quantity("U0", Dim::Voltage);
    p.OmegaT = c.quantity("OmegaT", Dim::AngularFrequency);
    p.R = c.quantity("R", Dim::Length);
    p.kappa = c.quantity("kappa", Dim::InverseArea);
    double A = c.quantity("amplitude", Dim::Length, 1e-6);
    int periods = static_cast<int>(c.integer("periods", 2));
    int points = static_cast<int>(c.integer("points", 400));
    c.reject_unused();
    MathieuCoeffs m = secular_frequencies(p);
    x.metric("a_x", m.a_x);
    x.metric("q_x", m.q_x);
    x.metric("beta_x", m.beta_x);
    x.metric("omega_x_hz", m.omega_x / two_pi);
    x.metric("omega_y_hz", m.omega_y / two_pi);
    x.metric("omega_z_hz", m.omega_z / two_pi);
    double T = periods * two_pi / m.omega_x;
    auto t = linspace(0.0, T, points);
    Trajectory tr = mathieu_trajectory(p, A, 0.0, t);
    Table &tab = x.table("trajectory", {"t [s]", "x [m]", "y [m]"});
    for (size_t i = 0; i < t.size(); ++i) tab.add({t[i], tr.x[i], tr.y[i]});
  } else if (v == "stability") {
    double mass = c.quantity("mass", Dim::Mass);
    double q = c.quantity("charge", Dim::Charge, constants::e);
    auto sc = c.quantities("s_c", Dim::Length);
    c.reject_unused();
    Table &tab = x.table("stability", {"s_c [m]", "omega_r_min/2pi [Hz]"});
    for (double s : sc) {
      double w = radial_stability_bound(s, q, mass);
      tab.add({s, w / two_pi});
      x.metric("omega_r_min_hz_s" + tag(s * 1e6) + "um", w / two_pi);
    }
  } else {
    throw bad_variant("trap", v, "secular, stability");
  }
}

// ---------------------------------------------------------------- modes

void run_modes(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("spectrum");
  auto Ls = c.integers("L");
  double wz = c.quantity("omega_z", Dim::AngularFrequency);
  double mass = c.quantity("mass", Dim::Mass, 9.012182 * constants::amu);
  double q = c.quantity("charge", Dim::Charge, constants::e);
  c.reject_unused();
  if (v == "spectrum") {
    Table &tab = x.table("modes", {"L", "k", "omega_k/omega_z", "omega_k/2pi [Hz]"});
    for (long L : Ls) {
      ChainGeometry g = chain_equilibrium(static_cast<int>(L), wz, q, mass);
      AxialModes m = axial_normal_modes(g, wz);
      for (size_t k = 0; k < m.frequencies.size(); ++k) {
        double r = m.frequencies[k] / wz;
        tab.add({static_cast<double>(L), static_cast<double>(k + 1), r, m.frequencies[k] / two_pi});
        x.metric("ratio_L" + std::to_string(L) + "_k" + std::to_string(k + 1), r);
      }
    }
  } else if (v == "chain") {
    Table &tab = x.table("positions", {"L", "i", "z/s", "z [m]"});
    Table gaps{"gaps", {"L", "s_min/s", "fit_056/s", "fit_0559/s", "fit_log/s", "iterations"}, {}, {}};
    for (long L : Ls) {
      ChainGeometry g = chain_equilibrium(static_cast<int>(L), wz, q, mass);
      for (int i = 0; i < g.L; ++i)
        tab.add({static_cast<double>(L), static_cast<double>(i + 1), g.positions[i] / g.scale_s, g.positions[i]});
      gaps.add({static_cast<double>(L), g.s_min / g.scale_s, g.fit_056 / g.scale_s, g.fit_0559 / g.scale_s,
                g.fit_log / g.scale_s, static_cast<double>(g.iterations)});
      std::string l = std::to_string(L);
      x.metric("gap_L" + l + "_over_s", g.s_min / g.scale_s);
      x.metric("gap_L" + l + "_over_fit056", g.s_min / g.fit_056);
      x.metric("residual_L" + l, g.residual);
    }
    x.r.tables.push_back(gaps);
  } else {
    throw bad_variant("modes", v, "spectrum, chain");
  }
}

// ---------------------------------------------------------------- rabi

void run_rabi(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("flop");
  if (v == "elements") {
    auto etas = c.quantities("eta", Dim::None);
    int n_max = static_cast<int>(c.integer("n_max", 10));
    c.reject_unused();
    Table &tab = x.table("elements", {"eta", "n", "carrier/Omega", "blue/Omega", "red/Omega", "carrier_ld/Omega",
                                      "blue_ld/Omega"});
    double pair_err = 0;
    for (double eta : etas) {
      CouplingParams cp{1.0, eta};
      for (int n = 0; n <= n_max; ++n) {
        tab.add({eta, static_cast<double>(n), rabi_frequency(n, n, cp), rabi_frequency(n, n + 1, cp),
                 n > 0 ? rabi_frequency(n, n - 1, cp) : 0.0, rabi_frequency(n, n, cp, RabiMode::LambDicke),
                 rabi_frequency(n, n + 1, cp, RabiMode::LambDicke)});
      }
      double ratio = rabi_frequency(1, 1, cp) / rabi_frequency(0, 0, cp);
      pair_err = std::max(pair_err, std::abs(ratio - (1.0 - eta * eta)));
    }
    x.metric("carrier_pair_err", pair_err);
  } else if (v == "flop") {
    std::vector<double> P;
    if (c.has("nbar")) {
      double nb = c.number("nbar");
      int n_cut = static_cast<int>(c.integer("n_cut", 20));
      P = thermal_distribution(nb, n_cut);
    } else {
      P = c.quantities("populations", Dim::None);
    }
    double eta = c.number("eta");
    double Omega = c.quantity("Omega", Dim::AngularFrequency);
    double g0 = c.quantity("gamma0", Dim::Rate);
    double t_max = c.quantity("t_max", Dim::Time);
    int points = static_cast<int>(c.integer("points", 200));
    bool fit = c.boolean("fit", true);
    c.reject_unused();
    CouplingParams cp{Omega, eta};
    RabiSignal s = rabi_decay_signal(P, g0, cp, linspace(0.0, t_max, points));
    Table &tab = x.table("flop", {"tau [s]", "P_down"});
    for (size_t i = 0; i < s.tau.size(); ++i) tab.add({s.tau[i], s.P_down[i]});
    double w10 = std::abs(rabi_frequency(1, 0, cp));
    x.metric("omega10_hz", w10 / two_pi);
    if (fit) {
      RabiFit f = fit_rabi_decay(s);
      x.metric("gamma0_fit", f.gamma0);
      x.metric("omega10_fit_hz", f.Omega / two_pi);
      x.metric("gamma0_rel_err", std::abs(f.gamma0 / g0 - 1.0));
      x.metric("omega10_rel_err", std::abs(f.Omega / w10 - 1.0));
      x.metric("fit_rms", f.rms);
      Table fitted{"fit", {"tau [s]", "P_down", "fit"}, {}, {}};
      for (size_t i = 0; i < s.tau.size(); ++i)
        fitted.add({s.tau[i], s.P_down[i],
                    0.5 * (1.0 + std::exp(-f.gamma0 * s.tau[i]) * std::cos(2.0 * f.Omega * s.tau[i]))});
      x.r.tables.push_back(fitted);
    }
  } else if (v == "debye_waller") {
    int modes = static_cast<int>(c.integer("modes"));
    double eta = c.number("eta");
    double nbar = c.number("nbar");
    double eps = c.number("eps");
    long samples = c.integer("samples", 100000);
    int bins = static_cast<int>(c.integer("bins", 60));
    c.reject_unused();
    ModeEnsemble e{std::vector<double>(modes, eta), std::vector<double>(modes, nbar), -1};
    DebyeWallerStats st = debye_waller_stats(e, eps);
    std::mt19937_64 rng(x.seed);
    std::geometric_distribution<int> geo(1.0 / (1.0 + nbar));
    double eta2 = eta * eta, s1 = 0, s2 = 0, inside = 0;
    std::vector<double> d(samples);
    for (long k = 0; k < samples; ++k) {
      double logf = 0;
      for (int m = 0; m < modes; ++m) logf += -0.5 * eta2 + std::log(std::abs(laguerre(geo(rng), 0.0, eta2)));
      double f = std::exp(logf);
      s1 += f;
      s2 += f * f;
      d[k] = f / st.mean_factor - 1.0;
      if (std::abs(d[k]) < eps) inside += 1;
    }
    double n = static_cast<double>(samples);
    double mean = s1 / n, var = s2 / n - mean * mean;
    double mc_rms = std::sqrt(std::max(0.0, var)) / st.mean_factor;
    x.metric("mean_factor", st.mean_factor);
    x.metric("mean_factor_mc", mean);
    x.metric("mean_z", std::abs(mean - st.mean_factor) / (std::sqrt(var / n)));
    x.metric("rms_exact", st.rms_exact);
    x.metric("rms_approx", st.rms_approx);
    x.metric("rms_mc", mc_rms);
    // Standard error of a sample standard deviation, 1 / sqrt(2(N-1)) relative.
    x.metric("rms_z", std::abs(mc_rms - st.rms_exact) / (st.rms_exact / std::sqrt(2.0 * (n - 1.0))));
    x.metric("prob_within", st.prob_within);
    x.metric("prob_within_mc", inside / n);
    double lim = 4.0 * st.rms_exact;
    Table &tab = x.table("debye_waller", {"dOmega/Omega", "density_mc", "density_gauss"});
    std::vector<double> h(bins, 0.0);
    double w = 2.0 * lim / bins;
    for (double y : d) {
      int b = static_cast<int>(std::floor((y + lim) / w));
      if (b >= 0 && b < bins) h[b] += 1;
    }
    for (int b = 0; b < bins; ++b) {
      double y = -lim + (b + 0.5) * w;
      double g = std::exp(-0.5 * y * y / (st.rms_exact * st.rms_exact)) / (std::sqrt(two_pi) * st.rms_exact);
      tab.add({y, h[b] / (n * w), g});
    }
  } else {
    throw bad_variant("rabi", v, "elements, flop, debye_waller");
  }
}

// ---------------------------------------------------------------- gate

void unitary_table(Ctx &x, const std::string &name, const Eigen::MatrixXcd &U, const Eigen::MatrixXcd *target) {
  std::vector<std::string> cols{"row", "col", "re", "im", "abs2"};
  if (target) {
    cols.push_back("target_re");
    cols.push_back("target_im");
  }
  Table &t = x.table(name, cols);
  for (int i = 0; i < U.rows(); ++i)
    for (int j = 0; j < U.cols(); ++j) {
      std::vector<double> row{double(i), double(j), U(i, j).real(), U(i, j).imag(), std::norm(U(i, j))};
      if (target) {
        row.push_back((*target)(i, j).real());
        row.push_back((*target)(i, j).imag());
      }
      t.add(row);
    }
}

double truth_table_error(const Eigen::MatrixXd &tt, const Eigen::MatrixXcd &ideal) {
  return (tt - ideal.cwiseAbs2()).cwiseAbs().maxCoeff();
}

void run_gate(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("cn_single");
  if (v == "cn_single") {
    int k = static_cast<int>(c.integer("k", 0));
    int m = static_cast<int>(c.integer("m", 1));
    double phi = c.quantity("phi", Dim::Angle, 0.0);
    double eta = c.has("eta") ? c.number("eta") : magic_eta(1, k, m).front();
    c.reject_unused();
    GateReport g = cn_gate_single_pulse(k, m, eta, phi);
    Eigen::MatrixXcd target = single_pulse_target(k, m, phi);
    unitary_table(x, "unitary", g.unitary, &target);
    x.metric("eta", eta);
    x.metric("fidelity", g.fidelity_vs_ideal);
    x.metric("max_entry_err", (g.unitary - target).cwiseAbs().maxCoeff());
    x.metric("truth_table_err", truth_table_error(g.truth_table, ideal_cn()));
  } else if (v == "cn_three") {
    double eta = c.number("eta_aux", 0.2);
    double phi = c.quantity("phi", Dim::Angle, pi / 2);
    c.reject_unused();
    GateReport g = cn_gate_three_pulse({1.0, eta}, phi);
    Eigen::MatrixXcd ideal = ideal_cn();
    unitary_table(x, "unitary", g.unitary, &ideal);
    x.metric("fidelity", g.fidelity_vs_ideal);
    x.metric("leakage", g.leakage);
    x.metric("truth_table_err", truth_table_error(g.truth_table, ideal_cn()));
  } else if (v == "cn_ions") {
    int L = static_cast<int>(c.integer("L", 2));
    int ctl = static_cast<int>(c.integer("control", 0));
    int tgt = static_cast<int>(c.integer("target", 1));
    c.reject_unused();
    GateReport g = cn_between_ions_report(L, ctl, tgt);
    Eigen::MatrixXcd ideal = Eigen::MatrixXcd::Zero(4, 4);
    ideal(0, 0) = ideal(1, 1) = 1.0;
    ideal(2, 3) = ideal(3, 2) = 1.0;
    unitary_table(x, "unitary", g.unitary, &ideal);
    x.metric("fidelity", g.fidelity_vs_ideal);
    x.metric("truth_table_err", truth_table_error(g.truth_table, ideal));
    x.metric("leakage", g.leakage);
  } else if (v == "entangle") {
    auto Ls = c.integers("L");
    c.reject_unused();
    Table &t = x.table("entangle", {"L", "overlap", "purity_ion0"});
    double worst = 1.0;
    for (long L : Ls) {
      Register r = prepare_max_entangled(static_cast<int>(L));
      double ov = max_entangled_overlap(r);
      t.add({double(L), ov, single_ion_purity(r, 0)});
      x.metric("overlap_L" + std::to_string(L), ov);
      worst = std::min(worst, ov);
    }
    x.metric("min_overlap", worst);
  } else if (v == "error_accumulation") {
    double zeta = c.quantity("zeta_rms", Dim::Angle);
    auto Ms = c.integers("M");
    int trials = static_cast<int>(c.integer("trials", 2000));
    double theta = c.quantity("theta", Dim::Angle, pi / 2);
    c.reject_unused();
    Table &t = x.table("accumulation", {"M", "infidelity_random", "infidelity_random_std", "infidelity_systematic",
                                        "systematic_closed_form"});
    std::vector<double> mx, my;
    double sys_err = 0;
    for (long M : Ms) {
      std::vector<PulseSpec> seq(M);
      for (auto &p : seq) {
        p.transition = Transition::carrier();
        p.theta = theta;
      }
      SequenceFidelity rnd = noisy_sequence_fidelity(seq, {zeta, 0.0, false}, trials, x.seed);
      SequenceFidelity sys = noisy_sequence_fidelity(seq, {zeta, 0.0, true}, 1, x.seed);
      double closed = 1.0 - std::pow(std::cos(M * zeta / 2.0), 2);
      t.add({double(M), 1.0 - rnd.F_mean, rnd.F_std / std::sqrt(double(trials)), 1.0 - sys.F_mean, closed});
      mx.push_back(double(M));
      my.push_back(1.0 - rnd.F_mean);
      sys_err = std::max(sys_err, std::abs((1.0 - sys.F_mean) - closed));
    }
    x.metric("slope_random", loglog_slope(mx, my));
    std::vector<double> sy;
    for (auto &row : t.rows) sy.push_back(row[3]);
    x.metric("slope_systematic", loglog_slope(mx, sy));
    x.metric("systematic_err", sys_err);
  } else {
    throw bad_variant("gate", v, "cn_single, cn_three, cn_ions, entangle, error_accumulation");
  }
}

// ---------------------------------------------------------------- cool

void run_cool(Ctx &x) {
  const Config &c = x.c;
  CoolingConfig cfg;
  cfg.eta = c.number("eta");
  cfg.omega_z = c.quantity("omega_z", Dim::AngularFrequency);
  if (c.has("omega_R")) {
    cfg.omega_R = c.quantity("omega_R", Dim::AngularFrequency);
  } else {
    cfg.omega_R = recoil_frequency(c.quantity("mass", Dim::Mass), c.quantity("wavelength", Dim::Length));
  }
  cfg.Omega = c.quantity("Omega", Dim::AngularFrequency);
  cfg.cycles = static_cast<int>(c.integer("cycles", 50));
  cfg.scatters_per_cycle = static_cast<int>(c.integer("scatters_per_cycle", 2));
  std::string strat = c.string("strategy", "randomized");
  if (strat == "fixed") {
    cfg.strategy = PulseStrategy::Fixed;
    cfg.pulse_time = c.quantity("pulse_time", Dim::Time, 0.0);
  } else if (strat == "randomized") {
    cfg.strategy = PulseStrategy::Randomized;
  } else if (strat == "schedule") {
    cfg.strategy = PulseStrategy::Schedule;
    cfg.schedule = c.quantities("schedule", Dim::None);
  } else {
    throw ConfigError("strategy", "expected fixed, randomized or schedule, got '" + strat + "'");
  }
  cfg.seed = x.seed;
  double nbar0 = c.number("nbar0");
  int n_max = static_cast<int>(c.integer("n_max", 40));
  std::optional<double> gamma_rad;
  if (c.has("gamma_rad")) gamma_rad = c.quantity("gamma_rad", Dim::AngularFrequency);
  c.reject_unused();
  auto P0 = thermal_distribution(nbar0, n_max);
  CoolingResult res = sideband_cool(P0, cfg);
  for (auto &w : res.warnings) x.r.warnings.push_back(w);
  Table &t = x.table("cooling", {"cycle", "mean_n", "P0", "pulse_time [s]"});
  for (size_t k = 0; k < res.nbar.size(); ++k)
    t.add({double(k), res.nbar[k], res.P0[k], k == 0 ? 0.0 : res.pulse_times[k - 1]});
  Table fin{"final_populations", {"n", "P_initial", "P_final"}, {}, {}};
  for (int n = 0; n <= n_max; ++n) fin.add({double(n), P0[n], res.P[n]});
  x.r.tables.push_back(fin);
  x.metric("P0_final", res.P0.back());
  x.metric("nbar_final", res.nbar.back());
  x.metric("recoil_hz", cfg.omega_R / two_pi);
  double norm = std::accumulate(res.P.begin(), res.P.end(), 0.0);
  x.metric("norm_err", std::abs(norm - 1.0));
  if (gamma_rad) x.metric("nbar_limit", cooling_limit(*gamma_rad, cfg.omega_z));
}

// ---------------------------------------------------------------- heat

void run_heat(Ctx &x) {
  const Config &c = x.c;
  Table &t = x.table("heating", {"model", "t_star [s]"});
  int id = 0;
  if (c.has("resistive")) {
    double wz = c.quantity("resistive.omega_z", Dim::AngularFrequency);
    double ell = c.has("resistive.ell_L")
                     ? c.quantity("resistive.ell_L", Dim::Inductance)
                     : ion_inductance(c.quantity("resistive.mass", Dim::Mass), c.quantity("resistive.d", Dim::Length),
                                      c.number("resistive.alpha"),
                                      c.quantity("resistive.charge", Dim::Charge, constants::e));
    double ts = t_star_resistive(wz, ell, c.quantity("resistive.r", Dim::Resistance),
                                 c.quantity("resistive.T", Dim::Temperature));
    x.metric("ell_L_h", ell);
    x.metric("t_star_resistive_s", ts);
    t.add({double(id), ts});
  }
  ++id;
  if (c.has("stray")) {
    double mass = c.quantity("stray.mass", Dim::Mass);
    double q = c.quantity("stray.charge", Dim::Charge, constants::e);
    double wz = c.quantity("stray.omega_z", Dim::AngularFrequency);
    double U0 = c.has("stray.U0") ? c.quantity("stray.U0", Dim::Voltage)
                                  : endcap_voltage_for(wz, c.quantity("stray.kappa", Dim::InverseArea), q, mass);
    double ts = t_star_stray_field(mass, q, wz, c.quantity("stray.S_U", Dim::VoltageNoise), U0,
                                   c.quantity("stray.E_s", Dim::ElectricField));
    x.metric("U0_v", U0);
    x.metric("t_star_stray_s", ts);
    t.add({double(id), ts});
  }
  ++id;
  if (c.has("patch")) {
    PatchResult p = patch_model(c.number("patch.theta"), c.quantity("patch.D", Dim::Diffusion),
                                c.quantity("patch.a_p", Dim::Length), c.quantity("patch.r_a", Dim::Length),
                                c.quantity("patch.kappa_V", Dim::Voltage),
                                c.quantity("patch.omega_z", Dim::AngularFrequency),
                                c.quantity("patch.ell_L", Dim::Inductance));
    x.metric("nu_c_hz", p.nu_c);
    x.metric("t_star_patch_s", p.t_star);
    t.add({double(id), p.t_star});
  }
  if (c.has("collisions")) {
    CollisionRates cr = collision_rates(
        c.quantity("collisions.polarizability", Dim::Volume), c.quantity("collisions.gas_mass", Dim::Mass),
        c.quantity("collisions.pressure", Dim::Pressure), c.quantity("collisions.T", Dim::Temperature),
        c.quantity("collisions.ion_mass", Dim::Mass), c.quantity("collisions.charge", Dim::Charge, constants::e));
    x.metric("k_langevin_cm3_s", cr.k_langevin * 1e6);
    x.metric("gamma_langevin", cr.gamma_langevin);
    x.metric("k_elastic_cm3_s", cr.k_elastic * 1e6);
    x.metric("gamma_elastic", cr.gamma_elastic);
  }
  c.reject_unused();
  t.meta.push_back("model: 0 resistive, 1 stray field, 2 surface patch");
}

// ---------------------------------------------------------------- noise

void run_noise(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("master");
  if (v == "master") {
    BathParams b{c.quantity("gamma", Dim::Rate), c.number("nbar")};
    int n_max = static_cast<int>(c.integer("n_max", 30));
    double t_end = c.quantity("t_end", Dim::Time);
    double dt = c.quantity("dt", Dim::Time, master_max_step(b, n_max));
    int every = static_cast<int>(c.integer("record_every", 1000));
    c.reject_unused();
    DensityMatrix rho = fock_density(0, n_max);
    Eigen::MatrixXcd d0 = master_rhs(rho.rho, b);
    double expect00 = -b.gamma * b.nbar;
    x.metric("rho00_dot_rel_err", std::abs(d0(0, 0).real() / expect00 - 1.0));
    Table &t = x.table("master", {"t [s]", "mean_n", "mean_n_closed_form", "P0", "P1"});
    t.add({0.0, 0.0, 0.0, 1.0, 0.0});
    long step = 0;
    double worst = 0;
    auto obs = [&](double tt, const Eigen::MatrixXcd &r) {
      if (++step % every) return;
      double mn = 0;
      for (int n = 0; n <= n_max; ++n) mn += n * r(n, n).real();
      double cf = mean_n_evolution(0.0, b, tt);
      worst = std::max(worst, std::abs(mn / cf - 1.0));
      t.add({tt, mn, cf, r(0, 0).real(), r(1, 1).real()});
    };
    DensityMatrix fin = master_equation_evolve(rho, b, t_end, dt, x.guard, obs);
    auto th = thermal_distribution(b.nbar, n_max);
    double tv = 0;
    for (int n = 0; n <= n_max; ++n) tv += std::abs(fin.rho(n, n).real() - th[n]);
    x.metric("tv_steady", 0.5 * tv);
    x.metric("mean_n_rel_err", worst);
    x.metric("trace_err", std::abs(fin.rho.trace().real() - 1.0));
  } else if (v == "slow") {
    std::string dist = c.string("distribution", "gaussian");
    NoiseDistribution d;
    if (dist == "gaussian")
      d = NoiseDistribution::Gaussian;
    else if (dist == "laplacian")
      d = NoiseDistribution::Laplacian;
    else
      throw ConfigError("distribution", "expected gaussian or laplacian, got '" + dist + "'");
    double dO = c.quantity("dOmega", Dim::AngularFrequency);
    double O0 = c.quantity("Omega0", Dim::AngularFrequency);
    double t_max = c.quantity("t_max", Dim::Time);
    int points = static_cast<int>(c.integer("points", 50));
    long samples = c.integer("samples", 20000);
    c.reject_unused();
    auto tau = linspace(0.0, t_max, points);
    auto env = slow_amplitude_noise_envelope(d, dO, tau, O0);
    std::mt19937_64 rng(x.seed);
    std::normal_distribution<double> gauss(0.0, dO);
    std::exponential_distribution<double> expo(std::sqrt(2.0) / dO);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> draws(samples);
    for (auto &w : draws) w = d == NoiseDistribution::Gaussian ? gauss(rng) : (coin(rng) ? 1 : -1) * expo(rng);
    Table &t = x.table("slow_noise", {"tau [s]", "P_down_analytic", "P_down_mc", "mc_stderr"});
    double worst = 0;
    for (size_t i = 0; i < tau.size(); ++i) {
      double s1 = 0, s2 = 0;
      for (double w : draws) {
        double p = 0.5 * (1.0 + std::cos(2.0 * (O0 + w) * tau[i]));
        s1 += p;
        s2 += p * p;
      }
      double n = double(samples), m = s1 / n;
      double se = std::sqrt(std::max(0.0, s2 / n - m * m) / n);
      if (se > 0) worst = std::max(worst, std::abs(m - env[i]) / se);
      t.add({tau[i], env[i], m, se});
    }
    x.metric("max_z", worst);
  } else if (v == "fast") {
    double dO = c.quantity("dOmega", Dim::AngularFrequency);
    double wa = c.quantity("omega_amp", Dim::AngularFrequency);
    double O0 = c.quantity("Omega0", Dim::AngularFrequency);
    double t_max = c.quantity("t_max", Dim::Time);
    int points = static_cast<int>(c.integer("points", 200));
    c.reject_unused();
    auto tau = linspace(0.0, t_max, points);
    FastNoise f = fast_amplitude_noise_visibility(dO, wa, tau, O0);
    Table &t = x.table("fast_noise", {"tau [s]", "P_down_closed_form", "P_down_exact"});
    double worst = 0;
    for (size_t i = 0; i < tau.size(); ++i) {
      t.add({tau[i], f.closed_form[i], f.exact[i]});
      worst = std::max(worst, std::abs(f.closed_form[i] - f.exact[i]));
    }
    x.metric("max_dev", worst);
    x.metric("visibility_reduction", 2.0 * std::pow(dO / wa, 2));
  } else if (v == "spectator") {
    double O = c.quantity("Omega", Dim::AngularFrequency);
    double Op = c.quantity("Omega_prime", Dim::AngularFrequency);
    double D = c.quantity("Delta", Dim::AngularFrequency);
    auto taus = c.quantities("tau_r", Dim::Time);
    bool comp = c.boolean("compensate", true);
    c.reject_unused();
    Table &t = x.table("spectator", {"tau_r*Delta", "C_s_square", "C_s_abrupt_off", "C_s_smooth", "Omega_prime/Delta"});
    SpectatorResult sq = spectator_leakage(O, Op, D, Envelope::Square, 0.0, comp);
    double est = std::abs(Op / D);
    x.metric("square_ratio", sq.C_s_final / est);
    double worst_sup = std::numeric_limits<double>::infinity(), worst_ratio = 0;
    for (double tr : taus) {
      SpectatorResult ab = spectator_leakage(O, Op, D, Envelope::SmoothOnAbruptOff, tr, comp);
      SpectatorResult sm = spectator_leakage(O, Op, D, Envelope::Smooth, tr, comp);
      t.add({tr * std::abs(D), sq.C_s_final, ab.C_s_final, sm.C_s_final, est});
      worst_ratio = std::max(worst_ratio, std::max(ab.C_s_final / est, est / ab.C_s_final));
      worst_sup = std::min(worst_sup, ab.C_s_final / sm.C_s_final);
    }
    x.metric("diabatic_ratio", worst_ratio);
    x.metric("suppression", worst_sup);
  } else {
    throw bad_variant("noise", v, "master, slow, fast, spectator");
  }
}

// ---------------------------------------------------------------- clock

void run_clock(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("lock");
  if (v == "lock") {
    auto Ls = c.integers("L");
    auto ns = c.quantities("n_exp", Dim::None);
    ClockParams p;
    p.C = c.number("C", 1.0);
    p.K2 = c.number("K2", 2.0);
    p.K3 = c.number("K3", 2.0);
    p.tau = c.quantity("tau", Dim::Time, 1.0);
    c.reject_unused();
    Table &t = x.table("clock", {"L", "n_exp", "domega_plain [rad/s]", "domega_entangled [rad/s]",
                                 "ratio", "K1_plain", "K1_entangled", "domega_K1_plain [rad/s]",
                                 "domega_K1_entangled [rad/s]"});
    double consistency = 0;
    for (long L : Ls)
      for (double n : ns) {
        p.L = static_cast<int>(L);
        p.n_exp = n;
        p.epsilon = 1.0;
        ClockResult b = clock_lock_analysis(p, ClockMode::ConstrainedK3);
        ClockResult b1 = clock_lock_analysis(p, ClockMode::ConstrainedK1);
        p.epsilon = 0.5;
        ClockResult a = clock_lock_analysis(p, ClockMode::ConstrainedK3);
        ClockResult a1 = clock_lock_analysis(p, ClockMode::ConstrainedK1);
        t.add({double(L), n, a.domega, b.domega, a.domega / b.domega, a.K1, b.K1, a1.domega, b1.domega});
        // K3 that makes K1 = 1, then compare the two stability expressions.
        for (double eps : {0.5, 1.0}) {
          ClockParams q = p;
          q.epsilon = eps;
          q.K3 = pi * std::pow(q.K2, n + 0.5) * std::pow(double(L), 1.0 - eps);
          if (q.K3 <= 1) continue;
          double d3 = clock_lock_analysis(q, ClockMode::ConstrainedK3).domega;
          double d1 = clock_lock_analysis(q, ClockMode::ConstrainedK1).domega;
          consistency = std::max(consistency, std::abs(d3 / d1 - 1.0));
        }
        x.metric("ratio_L" + std::to_string(L) + "_n" + tag(n), a.domega / b.domega);
      }
    x.metric("k1_consistency", consistency);
  } else if (v == "ramsey") {
    double T = c.quantity("T_R", Dim::Time);
    double span = c.quantity("span", Dim::AngularFrequency);
    int points = static_cast<int>(c.integer("points", 101));
    double phi1 = c.quantity("phi1", Dim::Angle, 0.0), phi2 = c.quantity("phi2", Dim::Angle, 0.0);
    c.reject_unused();
    Table &t = x.table("ramsey", {"offset [rad/s]", "P_down", "closed_form"});
    double worst = 0;
    for (double w : linspace(-span, span, points)) {
      double a = ramsey_probability(w, T, phi1, phi2), b = ramsey_closed_form(w, T, phi1, phi2);
      worst = std::max(worst, std::abs(a - b));
      t.add({w, a, b});
    }
    x.metric("max_dev", worst);
  } else if (v == "projection") {
    int L = static_cast<int>(c.integer("L"));
    double T = c.quantity("T_R", Dim::Time);
    auto taus = c.quantities("tau", Dim::Time);
    int runs = static_cast<int>(c.integer("runs", 500));
    c.reject_unused();
    Table &t = x.table("projection", {"tau [s]", "domega_formula [rad/s]", "domega_mc [rad/s]",
                                      "domega_entangled [rad/s]"});
    double worst = 0;
    for (size_t i = 0; i < taus.size(); ++i) {
      double f = projection_noise_stability(L, T, taus[i], false);
      double mc = projection_noise_monte_carlo(L, T, taus[i], runs, x.seed + i);
      t.add({taus[i], f, mc, projection_noise_stability(L, T, taus[i], true)});
      worst = std::max(worst, std::abs(mc / f - 1.0));
    }
    x.metric("mc_rel_err", worst);
    x.metric("entangled_gain", projection_noise_stability(L, T, taus[0], false) /
                                   projection_noise_stability(L, T, taus[0], true));
  } else {
    throw bad_variant("clock", v, "lock, ramsey, projection");
  }
}

// ---------------------------------------------------------------- tomography

void run_tomography(Ctx &x) {
  const Config &c = x.c;
  std::string v = x.variant("populations");
  if (v == "populations") {
    auto P = c.quantities("populations", Dim::None);
    double eta = c.number("eta");
    double Omega = c.quantity("Omega", Dim::AngularFrequency);
    double g0 = c.quantity("gamma0", Dim::Rate);
    double t_max = c.quantity("t_max", Dim::Time);
    int points = static_cast<int>(c.integer("points", 100));
    int n_cut = static_cast<int>(c.integer("n_cut", static_cast<long>(P.size()) - 1));
    double sigma = c.number("sigma", 0.0);
    int seeds = static_cast<int>(c.integer("seeds", 200));
    c.reject_unused();
    CouplingParams cp{Omega, eta};
    RabiSignal s = rabi_decay_signal(P, g0, cp, linspace(0.0, t_max, points));
    PopulationEstimate clean = invert_populations(s, cp, n_cut, g0);
    std::vector<double> mean(n_cut + 1, 0.0), worst(n_cut + 1, 0.0);
    auto truth = [&](int n) { return n < static_cast<int>(P.size()) ? P[n] : 0.0; };
    if (sigma > 0) {
      for (int k = 0; k < seeds; ++k) {
        std::mt19937_64 rng(x.seed + k);
        std::normal_distribution<double> nd(0.0, sigma);
        RabiSignal noisy = s;
        for (double &p : noisy.P_down) p += nd(rng);
        PopulationEstimate e = invert_populations(noisy, cp, n_cut, g0);
        for (int n = 0; n <= n_cut; ++n) {
          mean[n] += e.P[n] / seeds;
          worst[n] = std::max(worst[n], std::abs(e.P[n] - truth(n)));
        }
      }
    }
    Table &t = x.table("populations", {"n", "P_true", "P_nnls", "P_fourier", "P_noisy_mean", "P_noisy_max_err"});
    double clean_err = 0, noisy_err = 0;
    for (int n = 0; n <= n_cut; ++n) {
      t.add({double(n), truth(n), clean.P[n], clean.P_fourier[n], mean[n], worst[n]});
      clean_err = std::max(clean_err, std::abs(clean.P[n] - truth(n)));
      noisy_err = std::max(noisy_err, worst[n]);
    }
    Table sig{"signal", {"tau [s]", "P_down"}, {}, {}};
    for (size_t i = 0; i < s.tau.size(); ++i) sig.add({s.tau[i], s.P_down[i]});
    x.r.tables.push_back(sig);
    x.metric("max_err_noiseless", clean_err);
    if (sigma > 0) x.metric("max_err_noisy", noisy_err);
  } else if (v == "coherence") {
    double a0 = c.number("amp0"), a1 = c.number("amp1");
    double ph = c.quantity("phase", Dim::Angle, 0.0);
    double eta = c.number("eta");
    int n_max = static_cast<int>(c.integer("n_max", 3));
    c.reject_unused();
    QuantumState s = fock_state(Spin::Down, 0, n_max);
    double norm = std::sqrt(a0 * a0 + a1 * a1);
    s.amp.setZero();
    s.amp[QuantumState::idx(Spin::Down, 0)] = a0 / norm;
    s.amp[QuantumState::idx(Spin::Down, 1)] = std::polar(a1 / norm, ph);
    Coherence co = coherence_tomography(s, {1.0, eta});
    cplx truth = std::conj(s.amp[QuantumState::idx(Spin::Down, 0)]) * s.amp[QuantumState::idx(Spin::Down, 1)];
    Table &t = x.table("coherence", {"dphi [rad]", "P_down"});
    const double dphi[4] = {0.0, pi / 2, pi, -pi / 2};
    for (int k = 0; k < 4; ++k) t.add({dphi[k], co.P[k]});
    x.metric("re_rho01", co.rho01.real());
    x.metric("im_rho01", co.rho01.imag());
    x.metric("rho01_err", std::abs(co.rho01 - truth));
  } else {
    throw bad_variant("tomography", v, "populations, coherence");
  }
}

const std::map<std::string, std::function<void(Ctx &)>> &handlers() {
  static const std::map<std::string, std::function<void(Ctx &)>> h = {
      {"trap", run_trap},   {"modes", run_modes}, {"rabi", run_rabi},   {"gate", run_gate},
      {"cool", run_cool},   {"heat", run_heat},   {"noise", run_noise}, {"clock", run_clock},
      {"tomography", run_tomography}};
  return h;
}

double parse_plain(const std::string &s, const std::string &key) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key, "expected a number, got '" + s + "'");
  return v;
}

}  // namespace

Expectation evaluate_expectation(const std::string &line, const RunResult &r, const std::string &key_path) {
  std::istringstream in(line);
  std::string metric, op;
  in >> metric >> op;
  std::string rest;
  std::getline(in, rest);
  std::istringstream rs(rest);
  std::vector<std::string> tok;
  for (std::string w; rs >> w;) tok.push_back(w);
  if (metric.empty() || op.empty() || tok.empty()) throw ConfigError(key_path, "cannot parse expectation '" + line + "'");
  Expectation e;
  e.text = line;
  e.value = r.metric(metric);
  if (std::isnan(e.value)) throw ConfigError(key_path, "expectation names unknown metric '" + metric + "'");
  if (op == "~") {
    if (tok.size() != 3 || tok[1] != "+-") throw ConfigError(key_path, "expected 'metric ~ value +- tol' in '" + line + "'");
    double target = parse_plain(tok[0], key_path);
    std::string ts = tok[2];
    double tol;
    if (!ts.empty() && ts.back() == '%')
      tol = std::abs(target) * parse_plain(ts.substr(0, ts.size() - 1), key_path) / 100.0;
    else
      tol = parse_plain(ts, key_path);
    e.passed = std::abs(e.value - target) <= tol;
    return e;
  }
  if (tok.size() != 1) throw ConfigError(key_path, "trailing text in expectation '" + line + "'");
  double b = parse_plain(tok[0], key_path);
  if (op == "<") e.passed = e.value < b;
  else if (op == "<=") e.passed = e.value <= b;
  else if (op == ">") e.passed = e.value > b;
  else if (op == ">=") e.passed = e.value >= b;
  else throw ConfigError(key_path, "unknown operator '" + op + "'");
  return e;
}

std::vector<std::string> experiment_kinds() {
  std::vector<std::string> k;
  for (auto &[name, f] : handlers()) k.push_back(name);
  return k;
}

std::string manifest_text(const RunResult &r, const std::string &origin) {
  std::ostringstream o;
  o << "iontrap " << IONTRAP_VERSION_STRING << "\n";
  o << "scenario: " << r.name << "\n";
  o << "input: " << origin << "\n";
  o << "kind: " << r.kind << "\n";
  o << "variant: " << r.variant << "\n";
  o << "seed: " << r.seed << "\n";
  if (!r.description.empty()) o << "description: " << r.description << "\n";
  o << "files:\n";
  for (auto &f : r.files) o << "  " << f << "\n";
  o << "metrics:\n";
  for (auto &[k, v] : r.metrics) o << "  " << k << " = " << format_number(v) << "\n";
  for (auto &w : r.warnings) o << "warning: " << w << "\n";
  o << "expectations:\n";
  for (auto &e : r.expectations)
    o << "  " << (e.passed ? "PASS" : "FAIL") << "  " << e.text << "  (value " << format_number(e.value) << ")\n";
  o << "result: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

RunResult run_experiment(const Config &cfg, const std::string &name, const RunOptions &opt) {
  RunResult r;
  r.name = cfg.string("name", name);
  r.kind = cfg.string("kind");
  r.description = cfg.string("description", "");
  auto cfg_seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
  r.seed = opt.seed ? *opt.seed : cfg_seed;
  bool strict = cfg.boolean("strict", false) || opt.strict;
  auto it = handlers().find(r.kind);
  if (it == handlers().end()) {
    std::string all;
    for (auto &k : experiment_kinds()) all += (all.empty() ? "" : ", ") + k;
    throw ConfigError("kind", "unknown experiment kind '" + r.kind + "' (one of " + all + ")");
  }
  r.variant = cfg.string("variant", "");

  // Blocks read by the runner itself.
  std::vector<PlotSpec> plots;
  for (const ConfigNode *p : cfg.blocks("plot")) {
    PlotSpec s;
    std::map<std::string, std::string> kv;
    for (auto &ch : p->children) {
      ch->used = true;
      if (ch->is_block) throw ConfigError(ch->path, "nested block not allowed in plot");
      kv[ch->key] = ch->value;
    }
    for (auto &[k, val] : kv)
      if (k != "table" && k != "x" && k != "y" && k != "title" && k != "log_x" && k != "log_y")
        throw ConfigError(p->path + "." + k, "unknown key");
    if (!kv.count("x") || !kv.count("y")) throw ConfigError(p->path, "plot needs x and y");
    auto unq = [](std::string s) {
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      return s;
    };
    s.table = kv.count("table") ? unq(kv["table"]) : "";
    s.x = unq(kv["x"]);
    for (auto &y : split_list(kv["y"], p->path + ".y")) s.y.push_back(unq(y));
    s.title = kv.count("title") ? unq(kv["title"]) : r.name;
    s.log_x = kv.count("log_x") && kv["log_x"] == "true";
    s.log_y = kv.count("log_y") && kv["log_y"] == "true";
    plots.push_back(s);
  }
  std::vector<std::string> expect_lines;
  std::string expect_path = "expect";
  if (const ConfigNode *e = cfg.block("expect")) expect_lines = e->lines;

  Ctx x{cfg, r, r.seed, TruncationGuard{1e-8, strict, &r.warnings}};
  it->second(x);
  cfg.reject_unused();

  for (auto &line : expect_lines) r.expectations.push_back(evaluate_expectation(line, r, expect_path));

  for (auto &t : r.tables) {
    t.meta.insert(t.meta.begin(), {"scenario: " + r.name, "seed: " + std::to_string(r.seed)});
  }

  if (!opt.out_dir.empty()) {
    std::string base = opt.out_dir + "/";
    for (auto &t : r.tables) {
      std::string f = r.name + "." + t.name + ".csv";
      if (!write_text(base + f, to_csv(t))) throw IoError("cannot write " + base + f);
      r.files.push_back(f);
    }
    int k = 0;
    for (auto &p : plots) {
      const Table *t = &r.tables.front();
      if (!p.table.empty()) {
        t = nullptr;
        for (auto &tt : r.tables)
          if (tt.name == p.table) t = &tt;
        if (!t) throw ConfigError("plot.table", "no table named '" + p.table + "'");
      }
      if (t->column(p.x) < 0) throw ConfigError("plot.x", "no column '" + p.x + "' in table " + t->name);
      for (auto &y : p.y)
        if (t->column(y) < 0) throw ConfigError("plot.y", "no column '" + y + "' in table " + t->name);
      std::string f = r.name + ".plot" + std::to_string(k++) + ".svg";
      if (!write_text(base + f, to_svg(*t, p))) throw IoError("cannot write " + base + f);
      r.files.push_back(f);
    }
    std::string mf = r.name + ".manifest.txt";
    r.files.push_back(mf);
    if (!write_text(base + mf, manifest_text(r, cfg.origin()))) throw IoError("cannot write " + base + mf);
  }
  return r;
}

}  // namespace iontrap
