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

/* C interface to the iontrap library. Every function that can fail returns an
 * iontrap_status; the message of the last failure on the calling thread is
 * available from iontrap_last_error(). Handles are opaque and owned by the
 * caller, who releases them with the matching _free function. Strings
 * returned by accessors stay valid until the owning handle is freed. */
#ifndef IONTRAP_IONTRAP_H
#define IONTRAP_IONTRAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(IONTRAP_BUILDING)
#define IONTRAP_API __declspec(dllexport)
#else
#define IONTRAP_API __declspec(dllimport)
#endif
#else
#define IONTRAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iontrap_status {
  IONTRAP_OK = 0,
  IONTRAP_ERR_ARGUMENT = 1,
  IONTRAP_ERR_CONFIG = 2,
  IONTRAP_ERR_PHYSICS = 3,
  IONTRAP_ERR_IO = 4,
  IONTRAP_ERR_INTERNAL = 5
} iontrap_status;

IONTRAP_API const char *iontrap_version(void);

/* Details of the last failure on this thread. name is the error class
 * (e.g. "TruncationError", "ConfigError"); key is the config key path for
 * configuration errors and "" otherwise. */
IONTRAP_API const char *iontrap_last_error(void);
IONTRAP_API const char *iontrap_last_error_name(void);
IONTRAP_API const char *iontrap_last_error_key(void);

/* Experiment kinds understood by the runner. */
IONTRAP_API size_t iontrap_kind_count(void);
IONTRAP_API const char *iontrap_kind_name(size_t i);

/* Scenarios compiled into the library, in stable (sorted) order. */
IONTRAP_API size_t iontrap_scenario_count(void);
IONTRAP_API const char *iontrap_scenario_name(size_t i);
IONTRAP_API const char *iontrap_scenario_text(size_t i);
IONTRAP_API iontrap_status iontrap_scenario_info(size_t i, const char **kind, const char **description);

/* ------------------------------------------------------------------ runs */

typedef struct iontrap_run iontrap_run;

typedef struct iontrap_run_options {
  int has_seed;        /* nonzero: seed overrides the config */
  uint64_t seed;
  int strict;          /* nonzero: truncation warnings become errors */
  const char *out_dir; /* NULL or "": write nothing */
} iontrap_run_options;

IONTRAP_API iontrap_status iontrap_run_file(const char *path, const iontrap_run_options *opt, iontrap_run **out);
IONTRAP_API iontrap_status iontrap_run_bundled(const char *name, const iontrap_run_options *opt, iontrap_run **out);
IONTRAP_API iontrap_status iontrap_run_text(const char *text, const char *name, const iontrap_run_options *opt,
                                            iontrap_run **out);
IONTRAP_API void iontrap_run_free(iontrap_run *run);

IONTRAP_API const char *iontrap_run_name(const iontrap_run *run);
/* 1 when every expectation passed (or none were declared). */
IONTRAP_API int iontrap_run_passed(const iontrap_run *run);
IONTRAP_API size_t iontrap_run_metric_count(const iontrap_run *run);
IONTRAP_API iontrap_status iontrap_run_metric(const iontrap_run *run, size_t i, const char **name, double *value);
IONTRAP_API iontrap_status iontrap_run_metric_by_name(const iontrap_run *run, const char *name, double *value);
IONTRAP_API size_t iontrap_run_expectation_count(const iontrap_run *run);
IONTRAP_API iontrap_status iontrap_run_expectation(const iontrap_run *run, size_t i, const char **text, double *value,
                                                   int *passed);
IONTRAP_API size_t iontrap_run_table_count(const iontrap_run *run);
IONTRAP_API const char *iontrap_run_table_name(const iontrap_run *run, size_t i);
IONTRAP_API const char *iontrap_run_table_csv(const iontrap_run *run, size_t i);
IONTRAP_API size_t iontrap_run_warning_count(const iontrap_run *run);
IONTRAP_API const char *iontrap_run_warning(const iontrap_run *run, size_t i);
IONTRAP_API size_t iontrap_run_output_file_count(const iontrap_run *run);
IONTRAP_API const char *iontrap_run_output_file(const iontrap_run *run, size_t i);
IONTRAP_API const char *iontrap_run_manifest(const iontrap_run *run);

/* ------------------------------------------------------- motional states */

typedef struct iontrap_state iontrap_state;

typedef enum iontrap_transition { IONTRAP_CARRIER = 0, IONTRAP_RED = 1, IONTRAP_BLUE = 2 } iontrap_transition;

/* spin: 0 down, 1 up. */
IONTRAP_API iontrap_status iontrap_state_fock(int spin, int n, int n_max, iontrap_state **out);
IONTRAP_API iontrap_status iontrap_state_coherent(double re_alpha, double im_alpha, int n_max, iontrap_state **out);
IONTRAP_API void iontrap_state_free(iontrap_state *s);
IONTRAP_API int iontrap_state_n_max(const iontrap_state *s);
IONTRAP_API iontrap_status iontrap_state_amplitude(const iontrap_state *s, int spin, int n, double *re, double *im);
/* Fills out[2n + spin] for n = 0..n_max; len must be at least 2 (n_max + 1). */
IONTRAP_API iontrap_status iontrap_state_populations(const iontrap_state *s, double *out, size_t len);
/* Pulse of area theta on the default reference pair of the transition. */
IONTRAP_API iontrap_status iontrap_state_apply_pulse(iontrap_state *s, iontrap_transition kind, int order, double theta,
                                                     double phi, double Omega, double eta);

/* ------------------------------------------------------------- functions */

/* Axial mode frequencies of an L-ion chain in units of omega_z, ascending. */
IONTRAP_API iontrap_status iontrap_axial_mode_ratios(int L, double *out, size_t len);
IONTRAP_API iontrap_status iontrap_rabi_frequency(int n1, int n2, double Omega, double eta, double *out);
IONTRAP_API iontrap_status iontrap_cooling_limit(double gamma, double omega_z, double *out);

#ifdef __cplusplus
}
#endif

#endif
