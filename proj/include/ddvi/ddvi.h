// Copyright 2026 The ddvi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDVI_DDVI_H_
#define DDVI_DDVI_H_

#include <stddef.h>

#if defined(DDVI_BUILDING_LIBRARY)
#define DDVI_API __attribute__((visibility("default")))
#else
#define DDVI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the CLI. */
typedef enum ddvi_status {
  DDVI_OK = 0,
  DDVI_ERR_USAGE = 1,
  DDVI_ERR_CONFIG = 2,
  DDVI_ERR_RANK = 3,
  DDVI_ERR_NOT_CONVERGED = 4,
  DDVI_ERR_NUMERICAL = 5,
  DDVI_ERR_IO = 6
} ddvi_status;

typedef struct ddvi_scenario ddvi_scenario;
typedef struct ddvi_policy ddvi_policy;

/* Message for the most recent failure on the calling thread. */
DDVI_API const char* ddvi_last_error(void);
DDVI_API const char* ddvi_version(void);
DDVI_API const char* ddvi_status_name(ddvi_status status);

/* Scenarios. */
DDVI_API ddvi_status ddvi_scenario_default(ddvi_scenario** out);
DDVI_API ddvi_status ddvi_scenario_load(const char* path, ddvi_scenario** out);
DDVI_API ddvi_status ddvi_scenario_parse(const char* text, ddvi_scenario** out);
DDVI_API ddvi_status ddvi_scenario_save(const ddvi_scenario* s,
                                        const char* path);
/* Copies the YAML text into buf (NUL terminated) when it fits; *needed
 * receives the full length including the terminator. buf may be NULL. */
DDVI_API ddvi_status ddvi_scenario_to_string(const ddvi_scenario* s, char* buf,
                                             size_t capacity, size_t* needed);
DDVI_API size_t ddvi_scenario_warning_count(const ddvi_scenario* s);
DDVI_API const char* ddvi_scenario_warning(const ddvi_scenario* s, size_t i);
DDVI_API ddvi_status ddvi_scenario_set_output_dir(ddvi_scenario* s,
                                                  const char* dir);
DDVI_API const char* ddvi_scenario_output_dir(const ddvi_scenario* s);
DDVI_API double ddvi_scenario_period(const ddvi_scenario* s);
DDVI_API void ddvi_scenario_free(ddvi_scenario* s);

typedef struct ddvi_assumptions {
  int stabilizable;
  int observable;
  int cost_observable;
  int regulator_rank;
} ddvi_assumptions;

/* Checks the plant assumptions. Returns DDVI_OK when the report was built,
 * even if some checks fail; summary is optional (same contract as
 * ddvi_scenario_to_string). */
DDVI_API ddvi_status ddvi_validate(const ddvi_scenario* s,
                                   ddvi_assumptions* out, char* summary,
                                   size_t capacity, size_t* needed);

/* Policies: learned, loaded from a gains file, or model-based. */
DDVI_API ddvi_status ddvi_learn(const ddvi_scenario* s, ddvi_policy** out);
DDVI_API ddvi_status ddvi_oracle(const ddvi_scenario* s, ddvi_policy** out);
DDVI_API ddvi_status ddvi_policy_load(const char* gains_path,
                                      ddvi_policy** out);
DDVI_API ddvi_status ddvi_policy_save(const ddvi_policy* p,
                                      const char* gains_path);
/* Iteration trace; DDVI_ERR_USAGE for policies without one. */
DDVI_API ddvi_status ddvi_policy_save_trace(const ddvi_policy* p,
                                            const char* csv_path);
DDVI_API ddvi_status ddvi_policy_shape(const ddvi_policy* p, const char* name,
                                       size_t* rows, size_t* cols);
/* Row-major copy of block `name` ("K", "L", "P", "X", "U", ...). */
DDVI_API ddvi_status ddvi_policy_matrix(const ddvi_policy* p, const char* name,
                                        double* data, size_t rows, size_t cols);

typedef struct ddvi_learn_stats {
  long iterations;
  long resets;
  long theta_assemblies;
  long min_rank;
  double theta_condition;
  double data_residual;
} ddvi_learn_stats;

/* Learning statistics; DDVI_ERR_USAGE for loaded or model-based policies. */
DDVI_API ddvi_status ddvi_policy_stats(const ddvi_policy* p,
                                       ddvi_learn_stats* out);
DDVI_API void ddvi_policy_free(ddvi_policy* p);

typedef struct ddvi_branch_metrics {
  double cost;
  double terminal_error;
  double settling_time; /* NaN when the error never settles */
  double max_input;
  double blowup_time; /* NaN when the state stayed bounded */
} ddvi_branch_metrics;

typedef struct ddvi_comparison {
  ddvi_branch_metrics vi;
  ddvi_branch_metrics lqr;
} ddvi_comparison;

/* Simulates the policy (learned in-process when NULL) and the model-based
 * gains over the horizon. Writes trajectory_vi.csv, trajectory_lqr.csv and
 * summary.csv into out_dir (the scenario's output directory when NULL). */
DDVI_API ddvi_status ddvi_compare(const ddvi_scenario* s, const ddvi_policy* p,
                                  const char* out_dir, ddvi_comparison* out);

#ifdef __cplusplus
}
#endif

#endif /* DDVI_DDVI_H_ */
