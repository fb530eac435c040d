/*
 * Copyright 2026 The qprelax Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libqprelax.
 *
 * Every fallible call returns a qpr_status. On failure the message is
 * available from qpr_last_error() until the next call on the same thread.
 * Strings returned through char** are owned by the caller and released with
 * qpr_string_free. Matrices are dense and row-major.
 */

#ifndef QPRELAX_QPRELAX_H_
#define QPRELAX_QPRELAX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QPRELAX_BUILDING_LIBRARY)
#define QPR_API __attribute__((visibility("default")))
#else
#define QPR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpr_status {
  QPR_OK = 0,
  QPR_ERR_PARSE = 1,
  QPR_ERR_IO = 2,
  QPR_ERR_DIMENSION_MISMATCH = 3,
  QPR_ERR_ASYMMETRIC_Q = 4,
  QPR_ERR_NON_FINITE = 5,
  QPR_ERR_NEGATIVE_COMPONENT = 6,
  QPR_ERR_INFEASIBLE_MIXTURE_POINT = 7,
  QPR_ERR_RAY_NOT_IN_RECESSION_CONE = 8,
  QPR_ERR_WEIGHTS_NOT_SIMPLEX = 9,
  QPR_ERR_POINT_INFEASIBLE = 10,
  QPR_ERR_DESK_SCALE_LIMIT = 11,
  QPR_ERR_INVALID_DIMENSION = 12,
  QPR_ERR_GENERATION_FAILED = 13,
  QPR_ERR_INVALID_ARGUMENT = 14,
  QPR_ERR_NUMERIC = 15,
  QPR_ERR_INTERNAL = 16
} qpr_status;

typedef enum qpr_cone { QPR_CONE_DNN = 0, QPR_CONE_PSD0 = 1 } qpr_cone;

typedef enum qpr_solve_status {
  QPR_SOLVE_OPTIMAL = 0,
  QPR_SOLVE_UNBOUNDED = 1,
  QPR_SOLVE_INFEASIBLE = 2,
  QPR_SOLVE_MAX_ITER = 3
} qpr_solve_status;

typedef enum qpr_certificate_mode {
  QPR_MODE_OBJECTIVE = 0,
  QPR_MODE_FEASIBILITY = 1
} qpr_certificate_mode;

typedef struct qpr_instance qpr_instance;
typedef struct qpr_result qpr_result;

typedef struct qpr_solve_options {
  int max_iterations;
  double tol_primal;
  double tol_dual;
  double penalty;
  double tol_cert;
} qpr_solve_options;

QPR_API const char* qpr_last_error(void);
QPR_API const char* qpr_status_name(qpr_status status);
QPR_API void qpr_string_free(char* s);
QPR_API int qpr_enumeration_cap(void);

/* Instances. */
QPR_API qpr_status qpr_instance_load(const char* path, int symmetrize, qpr_instance** out);
QPR_API qpr_status qpr_instance_parse(const char* json, int symmetrize, qpr_instance** out);
QPR_API qpr_status qpr_instance_create(const char* name, int n, int m, const double* q,
                                       const double* c, const double* a, const double* b,
                                       qpr_instance** out);
QPR_API void qpr_instance_free(qpr_instance* inst);
QPR_API int qpr_instance_n(const qpr_instance* inst);
QPR_API int qpr_instance_m(const qpr_instance* inst);
QPR_API const char* qpr_instance_name(const qpr_instance* inst);
QPR_API qpr_status qpr_instance_to_json(const qpr_instance* inst, char** out);
QPR_API qpr_status qpr_instance_save(const qpr_instance* inst, const char* path);
QPR_API qpr_status qpr_instance_objective(const qpr_instance* inst, const double* x,
                                          double* out);
QPR_API qpr_status qpr_instance_is_feasible(const qpr_instance* inst, const double* x,
                                            int* out);

/* Reads an n-vector from a JSON file holding an array or {"x": [...]}. */
QPR_API qpr_status qpr_vector_load(const char* path, int n, double* out);

/* Generators. metadata may be NULL. */
QPR_API qpr_status qpr_generate_horn(qpr_instance** out, char** metadata);
QPR_API qpr_status qpr_generate_horn_family(int n, uint64_t seed, qpr_instance** out,
                                            char** metadata);
QPR_API qpr_status qpr_generate_random(const char* kind, int n, int m, uint64_t seed,
                                       qpr_instance** out, char** metadata);

/* Relaxations. options may be NULL for defaults; pin may be NULL. */
QPR_API void qpr_solve_options_default(qpr_solve_options* options);
QPR_API qpr_status qpr_solve(const qpr_instance* inst, qpr_cone cone,
                             const qpr_solve_options* options, const double* pin,
                             qpr_result** out);
QPR_API void qpr_result_free(qpr_result* result);
QPR_API qpr_solve_status qpr_result_status(const qpr_result* result);
QPR_API double qpr_result_value(const qpr_result* result);
QPR_API int qpr_result_iterations(const qpr_result* result);
QPR_API int qpr_result_has_point(const qpr_result* result);
/* y receives (n+1)*(n+1) entries. */
QPR_API qpr_status qpr_result_point(const qpr_result* result, double* y);
QPR_API int qpr_result_has_certificate(const qpr_result* result);
/* d receives (n+1)*(n+1) entries; rate may be NULL. */
QPR_API qpr_status qpr_result_certificate(const qpr_result* result, double* d, double* rate);
QPR_API qpr_status qpr_result_to_json(const qpr_result* result, char** out);

/* JSON-returning analyses. */
QPR_API qpr_status qpr_certificate_search(const qpr_instance* inst, qpr_cone cone,
                                          qpr_certificate_mode mode,
                                          const qpr_solve_options* options, char** out);
QPR_API qpr_status qpr_oracle(const qpr_instance* inst, char** out);
QPR_API qpr_status qpr_local_min(const qpr_instance* inst, const double* x, double tol,
                                 char** out);
QPR_API qpr_status qpr_envelope_csv(const qpr_instance* inst, qpr_cone cone,
                                    const double* from, const double* to, int samples,
                                    const qpr_solve_options* options, char** out);
QPR_API qpr_status qpr_analyze_report(const qpr_instance* inst, char** out);
QPR_API qpr_status qpr_compare_report(const qpr_instance* inst,
                                      const qpr_solve_options* options, char** out);
QPR_API qpr_status qpr_render_text(const char* json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QPRELAX_QPRELAX_H_ */
