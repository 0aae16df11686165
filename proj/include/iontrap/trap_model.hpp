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

#ifndef IONTRAP_TRAP_MODEL_HPP
#define IONTRAP_TRAP_MODEL_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace iontrap {

/// Linear rf trap. Angular frequencies in rad/s, everything else SI.
struct TrapParams {
  double V0 = 0;      // rf amplitude [V]
  double Ur = 0;      // static quadrupole offset [V], signed
  double U0 = 0;      // endcap potential [V]
  double OmegaT = 0;  // rf drive [rad/s]
  double R = 0;       // axis to electrode [m]
  double kappa = 0;   // axial geometric factor [1/m^2]
  double charge = 0;  // [C]
  double mass = 0;    // [kg]
  double geometry_factor = 1.0;  // multiplies the rod potential for non-ideal electrodes
};

struct MathieuCoeffs {
  double a_x, a_y, q_x, q_y;
  double beta_x, beta_y;
  double omega_x, omega_y, omega_z;
};

/// Closed form beta(a, q) of the lowest-order secular solution.
double mathieu_beta(double a, double q);

/// Throws InstabilityError outside q < 0.5, |a| < q^2 on either radial axis.
MathieuCoeffs secular_frequencies(const TrapParams &p);

/// Endcap voltage giving axial frequency omega_z.
double endcap_voltage_for(double omega_z, double kappa, double charge, double mass);

struct Trajectory {
  std::vector<double> x, y;
};

/// Secular motion plus micromotion to first order in a, second in q.
Trajectory mathieu_trajectory(const TrapParams &p, double A, double phi, const std::vector<double> &t);

struct ChainGeometry {
  int L = 0;
  std::vector<double> positions;  // [m], ascending
  double scale_s = 0;             // (q^2 / 4 pi eps0 m wz^2)^(1/3)
  double s_min = 0;               // smallest computed gap
  double fit_056 = 0;             // 2 s L^-0.56
  double fit_0559 = 0;            // 2.018 s L^-0.559
  double fit_log = 0;             // 1.92 s L^-2/3 [ln 0.8L]^1/3
  double residual = 0;            // max |force| in units of m wz^2 s
  int iterations = 0;
  std::vector<double> energy_path;  // dimensionless energy after each Newton step
};

/// Damped Newton on u = z/s from uniform spacing. ConvergenceError if the
/// residual stays above 1e-12.
ChainGeometry chain_equilibrium(int L, double omega_z, double charge, double mass);

struct AxialModes {
  std::vector<double> frequencies;  // ascending [rad/s]
  Eigen::MatrixXd vectors;          // column k is mode k
  Eigen::MatrixXd hessian;          // dimensionless, in units of m wz^2
};

AxialModes axial_normal_modes(const ChainGeometry &g, double omega_z);

struct AnisotropyReport {
  double fit_073, fit_063, fit_059;
  std::optional<double> quoted;  // exact statements for L = 2, 3
};

AnisotropyReport critical_anisotropy(int L);

/// Lower bound on the radial frequency that keeps a chain with central
/// spacing s_c linear.
double radial_stability_bound(double s_c, double charge, double mass);

struct FractionalDeltas {
  double V0 = 0, OmegaT = 0, R = 0, kappa = 0, U0 = 0;
};

struct FrequencySensitivity {
  double radial, axial;
};

/// Linear response. RangeError if any |delta| >= 0.1.
FrequencySensitivity frequency_sensitivities(const FractionalDeltas &d);

struct Micromotion {
  double dx, dy;          // displacement [m]
  double phi_Omega;       // modulation index
  double J0_factor;       // carrier reduction
  double small_angle;     // 1 - (phi/2)^2
};

Micromotion micromotion_suppression(double Ex, double Ey, const TrapParams &p, double kx, double ky);

/// Equivalent inductance of L ions moving between electrodes d apart.
double ion_inductance(double mass, double d, double alpha, double charge, int L = 1);

double t_star_resistive(double omega_z, double ell_L, double r, double T);
double t_star_field_noise(double mass, double charge, double omega_z, double S_E);
double t_star_stray_field(double mass, double charge, double omega_z, double S_U, double U0, double E_s);

struct PatchResult {
  double nu_c;    // [Hz]
  double S;       // potential noise at omega_z/2pi [V^2/Hz]
  double t_star;  // [s]
};

/// Adsorbate surface-diffusion model. Order of magnitude only.
PatchResult patch_model(double theta, double D, double a_p, double r_a, double kappa_V, double omega_z,
                        double ell_L);

enum class HeatingModel { Resistive, StrayField, Patch };

struct HeatingInputs {
  HeatingModel model = HeatingModel::Resistive;
  std::optional<double> omega_z, mass, charge, ell_L, r, T, S_E, S_U, U0, E_s;
  std::optional<double> theta, D, a_p, r_a, kappa_V;
};

struct HeatingEstimate {
  double t_star;
  std::optional<double> nu_c;
  bool order_of_magnitude = false;
};

/// Dispatches on the model; ModelInputError names the missing field.
HeatingEstimate heating_time_estimate(const HeatingInputs &in);

struct CollisionRates {
  double k_langevin;      // [m^3/s]
  double gamma_langevin;  // [1/s]
  double k_elastic;       // [m^3/s]
  double gamma_elastic;   // [1/s]
};

/// polarizability is the volume polarizability [m^3].
CollisionRates collision_rates(double polarizability, double gas_mass, double pressure, double T,
                               double ion_mass, double charge);

/// Elastic cross section at relative speed v [m^2].
double elastic_cross_section(double polarizability, double v, double charge);

/// Linear growth of mode k driven by two resonant modes through a field curvature.
double cross_mode_growth(double second_gradient, double Q_l, double Q_m, double omega_k, double charge,
                         double mass, double t);

/// Curvature needed to grow mode k to amplitude xi in time t with Q_l = Q_m = xi.
double cross_mode_required_gradient(double xi, double omega_k, double charge, double mass, double t);

/// Time to exchange motional energy between two ions in separate wells.
double exchange_time(double q1, double q2, double m1, double m2, double d, double omega_z);

}  // namespace iontrap

#endif
