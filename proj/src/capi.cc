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

#include "iontrap/iontrap.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "iontrap/cooling.hpp"
#include "iontrap/coupling.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/pulse_engine.hpp"
#include "iontrap/quantum_core.hpp"
#include "iontrap/trap_model.hpp"
#include "output.hpp"
#include "runner.hpp"

struct iontrap_run {
  iontrap::RunResult result;
  std::vector<std::string> csv;
  std::string manifest;
};

struct iontrap_state {
  iontrap::QuantumState state;
};

namespace {

struct LastError {
  std::string message, name, key;
};

thread_local LastError last_error;

iontrap_status fail(iontrap_status s, std::string msg, std::string name, std::string key = "") {
  last_error = {std::move(msg), std::move(name), std::move(key)};
  return s;
}

// Runs f, translating exceptions to status codes.
template <class F>
iontrap_status guarded(F &&f) {
  try {
    f();
    last_error = {};
    return IONTRAP_OK;
  } catch (const iontrap::ConfigError &e) {
    return fail(IONTRAP_ERR_CONFIG, e.what(), "ConfigError", e.key_path());
  } catch (const iontrap::PhysicsError &e) {
    return fail(IONTRAP_ERR_PHYSICS, e.what(), e.name());
  } catch (const iontrap::IoError &e) {
    return fail(IONTRAP_ERR_IO, e.what(), "IoError");
  } catch (const std::bad_alloc &) {
    return fail(IONTRAP_ERR_INTERNAL, "out of memory", "bad_alloc");
  } catch (const std::exception &e) {
    return fail(IONTRAP_ERR_INTERNAL, e.what(), "exception");
  }
}

iontrap::RunOptions to_options(const iontrap_run_options *opt) {
  iontrap::RunOptions o;
  if (!opt) return o;
  if (opt->has_seed) o.seed = opt->seed;
  o.strict = opt->strict != 0;
  if (opt->out_dir) o.out_dir = opt->out_dir;
  return o;
}

iontrap_status finish_run(const iontrap::Config &cfg, const std::string &name, const iontrap_run_options *opt,
                          iontrap_run **out) {
  auto run = std::make_unique<iontrap_run>();
  run->result = iontrap::run_experiment(cfg, name, to_options(opt));
  for (auto &t : run->result.tables) run->csv.push_back(iontrap::to_csv(t));
  run->manifest = iontrap::manifest_text(run->result, cfg.origin());
  *out = run.release();
  return IONTRAP_OK;
}

const iontrap::BundledScenario *find_bundled(const std::string &name) {
  for (auto &s : iontrap::bundled_scenarios())
    if (name == s.name) return &s;
  return nullptr;
}

struct ScenarioInfo {
  std::string kind, description;
};

}  // namespace

extern "C" {

const char *iontrap_version(void) { return IONTRAP_VERSION_STRING; }
const char *iontrap_last_error(void) { return last_error.message.c_str(); }
const char *iontrap_last_error_name(void) { return last_error.name.c_str(); }
const char *iontrap_last_error_key(void) { return last_error.key.c_str(); }

size_t iontrap_kind_count(void) { return iontrap::experiment_kinds().size(); }

const char *iontrap_kind_name(size_t i) {
  static const std::vector<std::string> kinds = iontrap::experiment_kinds();
  return i < kinds.size() ? kinds[i].c_str() : nullptr;
}

size_t iontrap_scenario_count(void) { return iontrap::bundled_scenarios().size(); }

const char *iontrap_scenario_name(size_t i) {
  auto &b = iontrap::bundled_scenarios();
  return i < b.size() ? b[i].name : nullptr;
}

const char *iontrap_scenario_text(size_t i) {
  auto &b = iontrap::bundled_scenarios();
  return i < b.size() ? b[i].text : nullptr;
}

iontrap_status iontrap_scenario_info(size_t i, const char **kind, const char **description) {
  static const std::vector<ScenarioInfo> info = [] {
    std::vector<ScenarioInfo> v;
    for (auto &s : iontrap::bundled_scenarios()) {
      ScenarioInfo si;
      try {
        auto cfg = iontrap::Config::parse(s.text, s.name);
        si.kind = cfg.string("kind", "");
        si.description = cfg.string("description", "");
      } catch (const std::exception &) {
      }
      v.push_back(si);
    }
    return v;
  }();
  if (i >= info.size()) return fail(IONTRAP_ERR_ARGUMENT, "scenario index out of range", "ArgumentError");
  if (kind) *kind = info[i].kind.c_str();
  if (description) *description = info[i].description.c_str();
  return IONTRAP_OK;
}

iontrap_status iontrap_run_file(const char *path, const iontrap_run_options *opt, iontrap_run **out) {
  if (!path || !out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  *out = nullptr;
  return guarded([&] {
    auto cfg = iontrap::Config::load(path);
    std::string stem = path;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".cfg") stem = stem.substr(0, stem.size() - 4);
    finish_run(cfg, stem, opt, out);
  });
}

iontrap_status iontrap_run_bundled(const char *name, const iontrap_run_options *opt, iontrap_run **out) {
  if (!name || !out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  *out = nullptr;
  const iontrap::BundledScenario *s = find_bundled(name);
  if (!s) return fail(IONTRAP_ERR_CONFIG, std::string("no bundled scenario named '") + name + "'", "ConfigError");
  return guarded([&] { finish_run(iontrap::Config::parse(s->text, s->name), s->name, opt, out); });
}

iontrap_status iontrap_run_text(const char *text, const char *name, const iontrap_run_options *opt,
                                iontrap_run **out) {
  if (!text || !out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  *out = nullptr;
  std::string n = name ? name : "inline";
  return guarded([&] { finish_run(iontrap::Config::parse(text, n), n, opt, out); });
}

void iontrap_run_free(iontrap_run *run) { delete run; }

const char *iontrap_run_name(const iontrap_run *run) { return run ? run->result.name.c_str() : nullptr; }
int iontrap_run_passed(const iontrap_run *run) { return run && run->result.passed() ? 1 : 0; }
size_t iontrap_run_metric_count(const iontrap_run *run) { return run ? run->result.metrics.size() : 0; }

iontrap_status iontrap_run_metric(const iontrap_run *run, size_t i, const char **name, double *value) {
  if (!run || i >= run->result.metrics.size()) return fail(IONTRAP_ERR_ARGUMENT, "metric index out of range", "ArgumentError");
  if (name) *name = run->result.metrics[i].first.c_str();
  if (value) *value = run->result.metrics[i].second;
  return IONTRAP_OK;
}

iontrap_status iontrap_run_metric_by_name(const iontrap_run *run, const char *name, double *value) {
  if (!run || !name) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  for (auto &[k, v] : run->result.metrics)
    if (k == name) {
      if (value) *value = v;
      return IONTRAP_OK;
    }
  return fail(IONTRAP_ERR_ARGUMENT, std::string("no metric named '") + name + "'", "ArgumentError");
}

size_t iontrap_run_expectation_count(const iontrap_run *run) { return run ? run->result.expectations.size() : 0; }

iontrap_status iontrap_run_expectation(const iontrap_run *run, size_t i, const char **text, double *value,
                                       int *passed) {
  if (!run || i >= run->result.expectations.size())
    return fail(IONTRAP_ERR_ARGUMENT, "expectation index out of range", "ArgumentError");
  auto &e = run->result.expectations[i];
  if (text) *text = e.text.c_str();
  if (value) *value = e.value;
  if (passed) *passed = e.passed ? 1 : 0;
  return IONTRAP_OK;
}

size_t iontrap_run_table_count(const iontrap_run *run) { return run ? run->result.tables.size() : 0; }

const char *iontrap_run_table_name(const iontrap_run *run, size_t i) {
  return run && i < run->result.tables.size() ? run->result.tables[i].name.c_str() : nullptr;
}

const char *iontrap_run_table_csv(const iontrap_run *run, size_t i) {
  return run && i < run->csv.size() ? run->csv[i].c_str() : nullptr;
}

size_t iontrap_run_warning_count(const iontrap_run *run) { return run ? run->result.warnings.size() : 0; }

const char *iontrap_run_warning(const iontrap_run *run, size_t i) {
  return run && i < run->result.warnings.size() ? run->result.warnings[i].c_str() : nullptr;
}

size_t iontrap_run_output_file_count(const iontrap_run *run) { return run ? run->result.files.size() : 0; }

const char *iontrap_run_output_file(const iontrap_run *run, size_t i) {
  return run && i < run->result.files.size() ? run->result.files[i].c_str() : nullptr;
}

const char *iontrap_run_manifest(const iontrap_run *run) { return run ? run->manifest.c_str() : nullptr; }

iontrap_status iontrap_state_fock(int spin, int n, int n_max, iontrap_state **out) {
  if (!out || (spin != 0 && spin != 1) || n < 0 || n > n_max)
    return fail(IONTRAP_ERR_ARGUMENT, "need spin in {0, 1} and 0 <= n <= n_max", "ArgumentError");
  *out = nullptr;
  return guarded([&] {
    *out = new iontrap_state{iontrap::fock_state(spin ? iontrap::Spin::Up : iontrap::Spin::Down, n, n_max)};
  });
}

iontrap_status iontrap_state_coherent(double re_alpha, double im_alpha, int n_max, iontrap_state **out) {
  if (!out || n_max < 0) return fail(IONTRAP_ERR_ARGUMENT, "need n_max >= 0", "ArgumentError");
  *out = nullptr;
  return guarded([&] { *out = new iontrap_state{iontrap::coherent_state({re_alpha, im_alpha}, n_max)}; });
}

void iontrap_state_free(iontrap_state *s) { delete s; }

int iontrap_state_n_max(const iontrap_state *s) { return s ? s->state.n_max : -1; }

iontrap_status iontrap_state_amplitude(const iontrap_state *s, int spin, int n, double *re, double *im) {
  if (!s || (spin != 0 && spin != 1) || n < 0 || n > s->state.n_max)
    return fail(IONTRAP_ERR_ARGUMENT, "amplitude index out of range", "ArgumentError");
  auto a = s->state.amp[iontrap::QuantumState::idx(spin ? iontrap::Spin::Up : iontrap::Spin::Down, n)];
  if (re) *re = a.real();
  if (im) *im = a.imag();
  return IONTRAP_OK;
}

iontrap_status iontrap_state_populations(const iontrap_state *s, double *out, size_t len) {
  if (!s || !out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  auto p = iontrap::populations(s->state);
  if (len < p.size()) return fail(IONTRAP_ERR_ARGUMENT, "output buffer too short", "ArgumentError");
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i];
  return IONTRAP_OK;
}

iontrap_status iontrap_state_apply_pulse(iontrap_state *s, iontrap_transition kind, int order, double theta,
                                         double phi, double Omega, double eta) {
  if (!s) return fail(IONTRAP_ERR_ARGUMENT, "null state", "ArgumentError");
  return guarded([&] {
    iontrap::PulseSpec p;
    switch (kind) {
      case IONTRAP_CARRIER: p.transition = iontrap::Transition::carrier(); break;
      case IONTRAP_RED: p.transition = iontrap::Transition::red(order); break;
      case IONTRAP_BLUE: p.transition = iontrap::Transition::blue(order); break;
      default: throw iontrap::InvalidTransitionError("unknown transition kind");
    }
    p.theta = theta;
    p.phi = phi;
    p.coupling = {Omega, eta};
    s->state = iontrap::apply_pulse(s->state, p);
  });
}

iontrap_status iontrap_axial_mode_ratios(int L, double *out, size_t len) {
  if (!out || L < 1 || len < static_cast<size_t>(L))
    return fail(IONTRAP_ERR_ARGUMENT, "need L >= 1 and len >= L", "ArgumentError");
  return guarded([&] {
    const double wz = 1.0e6, m = 9.012182 * 1.66053906660e-27, q = 1.602176634e-19;
    auto modes = iontrap::axial_normal_modes(iontrap::chain_equilibrium(L, wz, q, m), wz);
    for (int k = 0; k < L; ++k) out[k] = modes.frequencies[k] / wz;
  });
}

iontrap_status iontrap_rabi_frequency(int n1, int n2, double Omega, double eta, double *out) {
  if (!out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  return guarded([&] { *out = iontrap::rabi_frequency(n1, n2, {Omega, eta}); });
}

iontrap_status iontrap_cooling_limit(double gamma, double omega_z, double *out) {
  if (!out) return fail(IONTRAP_ERR_ARGUMENT, "null argument", "ArgumentError");
  return guarded([&] { *out = iontrap::cooling_limit(gamma, omega_z); });
}

}  // extern "C"
