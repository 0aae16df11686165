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

#include "iontrap/trap_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"

namespace iontrap {

namespace c = constants;

double mathieu_beta(double a, double q) {
  double num = a + 0.5 * q * q;
  double den = 1.0 - 3.0 * q * q / 8.0;
  if (num <= 0 || den <= 0) throw InstabilityError("mathieu_beta: (a, q) outside the lowest stability region");
  return std::sqrt(num / den);
}

static void check_stable(double a, double q, const char *axis) {
  double aq = std::abs(q);
  if (!(aq < 0.5) || !(std::abs(a) < q * q)) {
    throw InstabilityError(std::string("trap unstable along ") + axis + ": need |q| < 0.5 and |a| < q^2 (a=" +
                           std::to_string(a) + ", q=" + std::to_string(q) + ")");
  }
}

MathieuCoeffs secular_frequencies(const TrapParams &p) {
  if (p.mass <= 0 || p.charge <= 0 || p.OmegaT <= 0 || p.R <= 0)
    throw InstabilityError("secular_frequencies: mass, charge, drive and R must be positive");
  MathieuCoeffs m{};
  double pref = 4.0 * p.charge / (p.mass * p.OmegaT * p.OmegaT);
  double rod = p.Ur * p.geometry_factor / (p.R * p.R);
  m.a_x = pref * (rod - p.kappa * p.U0);
  m.a_y = -pref * (rod + p.kappa * p.U0);
  m.q_x = 2.0 * p.charge * p.V0 * p.geometry_factor / (p.mass * p.OmegaT * p.OmegaT * p.R * p.R);
  m.q_y = -m.q_x;
  check_stable(m.a_x, m.q_x, "x");
  check_stable(m.a_y, m.q_y, "y");
  m.beta_x = mathieu_beta(m.a_x, m.q_x);
  m.beta_y = mathieu_beta(m.a_y, m.q_y);
  m.omega_x = 0.5 * m.beta_x * p.OmegaT;
  m.omega_y = 0.5 * m.beta_y * p.OmegaT;
  m.omega_z = p.U0 > 0 ? std::sqrt(2.0 * p.kappa * p.charge * p.U0 / p.mass) : 0.0;
  return m;
}

double endcap_voltage_for(double omega_z, double kappa, double charge, double mass) {
  return mass * omega_z * omega_z / (2.0 * kappa * charge);
}

Trajectory mathieu_trajectory(const TrapParams &p, double A, double phi, const std::vector<double> &t) {
  MathieuCoeffs m = secular_frequencies(p);
  Trajectory tr;
  tr.x.reserve(t.size());
  tr.y.reserve(t.size());
  auto axis = [&](double q, double beta, double w, double ti) {
    double s = w * ti + phi;
    double d = p.OmegaT * ti;
    return A * (std::cos(s) * (1.0 + 0.5 * q * std::cos(d) + q * q / 32.0 * std::cos(2.0 * d)) +
                beta * 0.5 * q * std::sin(s) * std::sin(d));
  };
  for (double ti : t) {
    tr.x.push_back(axis(m.q_x, m.beta_x, m.omega_x, ti));
    tr.y.push_back(axis(m.q_y, m.beta_y, m.omega_y, ti));
  }
  return tr;
}

// Dimensionless chain: E = sum u^2/2 + sum_{i<j} 1/|u_i - u_j|.
static double chain_energy(const Eigen::VectorXd &u) {
  double e = 0.5 * u.squaredNorm();
  for (int i = 0; i < u.size(); ++i)
    for (int j = i + 1; j < u.size(); ++j) e += 1.0 / std::abs(u[i] - u[j]);
  return e;
}

static Eigen::VectorXd chain_force(const Eigen::VectorXd &u) {
  Eigen::VectorXd f = -u;
  for (int i = 0; i < u.size(); ++i)
    for (int j = 0; j < u.size(); ++j) {
      if (i == j) continue;
      double d = u[i] - u[j];
      f[i] += (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  return f;
}

static Eigen::MatrixXd chain_hessian(const Eigen::VectorXd &u) {
  const int L = static_cast<int>(u.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j) continue;
      double k = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
      H(i, i) += k;
      H(i, j) -= k;
    }
  return H;
}

ChainGeometry chain_equilibrium(int L, double omega_z, double charge, double mass) {
  if (L < 1) throw ConvergenceError("chain_equilibrium: L must be >= 1");
  ChainGeometry g;
  g.L = L;
  g.scale_s = std::cbrt(charge * charge / (4.0 * c::pi * c::eps0 * mass * omega_z * omega_z));
  g.fit_056 = 2.0 * g.scale_s * std::pow(L, -0.56);
  g.fit_0559 = 2.018 * g.scale_s * std::pow(L, -0.559);
  g.fit_log = L > 1 ? 1.92 * g.scale_s * std::pow(L, -2.0 / 3.0) * std::cbrt(std::log(0.8 * L)) : 0.0;

  Eigen::VectorXd u(L);
  double gap0 = L > 1 ? 2.0 * std::pow(L, -0.56) : 0.0;
  for (int i = 0; i < L; ++i) u[i] = (i - 0.5 * (L - 1)) * gap0;

  double energy = chain_energy(u);
  g.energy_path.push_back(energy);
  Eigen::VectorXd f = chain_force(u);
  const int cap = 200;
  int it = 0;
  while (f.lpNorm<Eigen::Infinity>() > 1e-12 && it < cap) {
    Eigen::VectorXd step = chain_hessian(u).ldlt().solve(f);
    double lambda = 1.0;
    Eigen::VectorXd trial;
    double e_trial = 0;
    for (int k = 0; k < 60; ++k) {
      trial = u + lambda * step;
      bool ordered = true;
      for (int i = 1; i < L; ++i) ordered = ordered && trial[i] > trial[i - 1];
      if (ordered) {
        e_trial = chain_energy(trial);
        if (e_trial <= energy) break;
      }
      lambda *= 0.5;
    }
    u = trial;
    energy = std::min(energy, e_trial);
    g.energy_path.push_back(e_trial);
    f = chain_force(u);
    ++it;
  }
  g.iterations = it;
  g.residual = L > 0 ? f.lpNorm<Eigen::Infinity>() : 0.0;
  if (g.residual > 1e-12) {
    throw ConvergenceError("chain_equilibrium: force residual " + std::to_string(g.residual) + " after " +
                           std::to_string(cap) + " Newton steps");
  }
  g.positions.resize(L);
  for (int i = 0; i < L; ++i) g.positions[i] = u[i] * g.scale_s;
  g.s_min = 0.0;
  if (L > 1) {
    g.s_min = g.positions[1] - g.positions[0];
    for (int i = 2; i < L; ++i) g.s_min = std::min(g.s_min, g.positions[i] - g.positions[i - 1]);
  }
  return g;
}

AxialModes axial_normal_modes(const ChainGeometry &g, double omega_z) {
  const int L = g.L;
  Eigen::VectorXd u(L);
  for (int i = 0; i < L; ++i) u[i] = g.positions[i] / g.scale_s;
  AxialModes m;
  m.hessian = chain_hessian(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.hessian);
  m.vectors = es.eigenvectors();
  for (int k = 0; k < L; ++k) {
    m.frequencies.push_back(omega_z * std::sqrt(std::max(0.0, es.eigenvalues()[k])));
    // Fix the sign so the first significant component is positive.
    for (int i = 0; i < L; ++i) {
      if (std::abs(m.vectors(i, k)) > 1e-8) {
        if (m.vectors(i, k) < 0) m.vectors.col(k) *= -1.0;
        break;
      }
    }
  }
  return m;
}

AnisotropyReport critical_anisotropy(int L) {
  AnisotropyReport r{};
  r.fit_073 = 0.73 * std::pow(L, 0.86);
  r.fit_063 = 0.63 * std::pow(L, 0.865);
  r.fit_059 = 0.59 * std::pow(L, 0.885);
  if (L == 2) r.quoted = 1.0;
  if (L == 3) r.quoted = 1.55;
  return r;
}

double radial_stability_bound(double s_c, double charge, double mass) {
  if (s_c <= 0) throw RangeError("radial_stability_bound: s_c must be positive");
  double w2 = 7.0 * std::riemann_zeta(3.0) * charge * charge / (8.0 * c::pi * c::eps0 * mass * std::pow(s_c, 3));
  return std::sqrt(w2);
}

FrequencySensitivity frequency_sensitivities(const FractionalDeltas &d) {
  for (double v : {d.V0, d.OmegaT, d.R, d.kappa, d.U0}) {
    if (!(std::abs(v) < 0.1)) throw RangeError("frequency_sensitivities: fractional change outside the linear regime");
  }
  return {d.V0 - d.OmegaT - 2.0 * d.R, 0.5 * (d.kappa + d.U0)};
}

Micromotion micromotion_suppression(double Ex, double Ey, const TrapParams &p, double kx, double ky) {
  MathieuCoeffs m = secular_frequencies(p);
  Micromotion r{};
  r.dx = p.charge * Ex / (p.mass * m.omega_x * m.omega_x);
  r.dy = p.charge * Ey / (p.mass * m.omega_y * m.omega_y);
  r.phi_Omega = 0.5 * m.q_x * (kx * r.dx - ky * r.dy);
  r.J0_factor = std::cyl_bessel_j(0.0, std::abs(r.phi_Omega));
  r.small_angle = 1.0 - 0.25 * r.phi_Omega * r.phi_Omega;
  return r;
}

double ion_inductance(double mass, double d, double alpha, double charge, int L) {
  return mass * d * d / (L * std::pow(alpha * charge, 2));
}

double t_star_resistive(double omega_z, double ell_L, double r, double T) {
  return c::hbar * omega_z * ell_L / (c::kB * T * r);
}

double t_star_field_noise(double mass, double charge, double omega_z, double S_E) {
  return 4.0 * mass * c::hbar * omega_z / (charge * charge * S_E);
}

double t_star_stray_field(double mass, double charge, double omega_z, double S_U, double U0, double E_s) {
  return t_star_field_noise(mass, charge, omega_z, S_U) * std::pow(U0 / E_s, 2);
}

PatchResult patch_model(double theta, double D, double a_p, double r_a, double kappa_V, double omega_z,
                        double ell_L) {
  PatchResult r{};
  double nu = omega_z / c::two_pi;
  r.nu_c = 4.0 * D / (a_p * a_p);
  r.S = 4.0 * theta * std::sqrt(D) * std::pow(kappa_V * r_a, 2) / (3.0 * std::pow(a_p, 3)) * std::pow(nu, -1.5);
  r.t_star = 4.0 * c::hbar * omega_z * ell_L / r.S;
  return r;
}

static double need(const std::optional<double> &v, const char *name, const char *model) {
  if (!v) throw ModelInputError(std::string("heating model '") + model + "' requires '" + name + "'");
  if (!(*v > 0) && std::string(name) != "U0")
    throw ModelInputError(std::string("heating model '") + model + "': '" + name + "' must be positive");
  return *v;
}

HeatingEstimate heating_time_estimate(const HeatingInputs &in) {
  HeatingEstimate e{};
  switch (in.model) {
    case HeatingModel::Resistive: {
      double w = need(in.omega_z, "omega_z", "resistive");
      if (in.S_E) {
        e.t_star = t_star_field_noise(need(in.mass, "mass", "resistive"), need(in.charge, "charge", "resistive"), w,
                                      need(in.S_E, "S_E", "resistive"));
      } else {
        e.t_star = t_star_resistive(w, need(in.ell_L, "ell_L", "resistive"), need(in.r, "r", "resistive"),
                                    need(in.T, "T", "resistive"));
      }
      break;
    }
    case HeatingModel::StrayField:
      e.t_star = t_star_stray_field(need(in.mass, "mass", "stray_field"), need(in.charge, "charge", "stray_field"),
                                    need(in.omega_z, "omega_z", "stray_field"), need(in.S_U, "S_U", "stray_field"),
                                    need(in.U0, "U0", "stray_field"), need(in.E_s, "E_s", "stray_field"));
      break;
    case HeatingModel::Patch: {
      PatchResult p = patch_model(need(in.theta, "theta", "patch"), need(in.D, "D", "patch"),
                                  need(in.a_p, "a_p", "patch"), need(in.r_a, "r_a", "patch"),
                                  need(in.kappa_V, "kappa_V", "patch"), need(in.omega_z, "omega_z", "patch"),
                                  need(in.ell_L, "ell_L", "patch"));
      e.t_star = p.t_star;
      e.nu_c = p.nu_c;
      e.order_of_magnitude = true;
      break;
    }
  }
  return e;
}

CollisionRates collision_rates(double polarizability, double gas_mass, double pressure, double T, double ion_mass,
                               double charge) {
  if (!(T > 0) || pressure < 0) throw RangeError("collision_rates: need T > 0 and P >= 0");
  double mu = gas_mass * ion_mass / (gas_mass + ion_mass);
  double n = pressure / (c::kB * T);
  CollisionRates r{};
  r.k_langevin = charge * std::sqrt(c::pi * polarizability / (c::eps0 * mu));
  double v = std::sqrt(2.0 * c::kB * T / mu);
  r.k_elastic = 1.23e5 * std::pow(polarizability, 2.0 / 3.0) * std::cbrt(v);
  r.gamma_langevin = n * r.k_langevin;
  r.gamma_elastic = n * r.k_elastic;
  return r;
}

double elastic_cross_section(double polarizability, double v, double charge) {
  double x = polarizability * charge * charge / (16.0 * c::eps0 * c::hbar * v);
  return c::pi * std::tgamma(1.0 / 3.0) * std::pow(x, 2.0 / 3.0);
}

double cross_mode_growth(double second_gradient, double Q_l, double Q_m, double omega_k, double charge, double mass,
                         double t) {
  return std::abs(charge * t * Q_l * Q_m * second_gradient / (2.0 * mass * omega_k));
}

double cross_mode_required_gradient(double xi, double omega_k, double charge, double mass, double t) {
  return 2.0 * mass * omega_k / (charge * t * xi);
}

double exchange_time(double q1, double q2, double m1, double m2, double d, double omega_z) {
  double dw = q1 * q2 / (2.0 * c::pi * c::eps0 * std::pow(d, 3) * omega_z * std::sqrt(m1 * m2));
  return c::pi / dw;
}

}  // namespace iontrap
