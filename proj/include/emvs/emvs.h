// SPDX-License-Identifier: Apache-2.0
//
// emvs-parafac: angle and polarization estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 The emvs-parafac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/*
 * C interface to the emvs library.
 *
 * Objects are opaque handles created by `*_create`/`*_load`/producer calls
 * and released with the matching `*_free`. Every fallible call returns an
 * emvs_status; on failure a thread-local message is available from
 * emvs_last_error() until the next failing call on the same thread.
 * Angles crossing this interface are radians unless a name says _deg.
 */

#ifndef EMVS_EMVS_H
#define EMVS_EMVS_H

#include <stddef.h>
#include <stdint.h>

#if defined(EMVS_BUILDING_LIBRARY)
#define EMVS_API __attribute__((visibility("default")))
#else
#define EMVS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum emvs_status
{
    EMVS_OK = 0,
    EMVS_ERR_ARGUMENT = 1,
    EMVS_ERR_DIMENSION = 2,
    EMVS_ERR_IDENTIFIABILITY = 3,
    EMVS_ERR_NUMERICAL = 4,
    EMVS_ERR_DEGENERATE = 5,
    EMVS_ERR_IO = 6,
    EMVS_ERR_CONFIG = 7,
    EMVS_ERR_INTERNAL = 8
} emvs_status;

typedef enum emvs_method
{
    EMVS_METHOD_NESTED = 0,
    EMVS_METHOD_BASELINE = 1
} emvs_method;

typedef enum emvs_param_group
{
    EMVS_GROUP_ANGLE = 0,
    EMVS_GROUP_POLARIZATION = 1
} emvs_param_group;

/* Parameter order of every double[8] exchanged below. */
enum
{
    EMVS_THETA_T = 0,
    EMVS_PHI_T,
    EMVS_GAMMA_T,
    EMVS_ETA_T,
    EMVS_THETA_R,
    EMVS_PHI_R,
    EMVS_GAMMA_R,
    EMVS_ETA_R,
    EMVS_PARAM_COUNT
};

typedef struct emvs_scene emvs_scene;
typedef struct emvs_dataset emvs_dataset;
typedef struct emvs_estimates emvs_estimates;
typedef struct emvs_bench_config emvs_bench_config;
typedef struct emvs_bench_result emvs_bench_result;

typedef struct emvs_als_options
{
    int max_iters;
    double rel_tol;
    int restarts;
    uint64_t seed;
} emvs_als_options;

EMVS_API const char *emvs_version(void);
EMVS_API const char *emvs_last_error(void);
EMVS_API const char *emvs_status_string(emvs_status status);

EMVS_API void emvs_als_options_default(emvs_als_options *opts);

/* ---- scenes ---------------------------------------------------------- */

/* JSON scene/bench document (see README); bench-only keys are ignored. */
EMVS_API emvs_status emvs_scene_from_json(const char *json_text, emvs_scene **out);
EMVS_API emvs_status emvs_scene_load(const char *path, emvs_scene **out);
/* Scene from raw parameters: `params` holds K rows of 8 radians. */
EMVS_API emvs_status emvs_scene_create(int M, int N, int L, int K, const double *params, emvs_scene **out);
EMVS_API void emvs_scene_free(emvs_scene *scene);
EMVS_API emvs_status emvs_scene_dims(const emvs_scene *scene, int *M, int *N, int *L, int *K);
EMVS_API emvs_status emvs_scene_target(const emvs_scene *scene, int k, double params[8]);

/* ---- datasets -------------------------------------------------------- */

/* has_snr == 0 synthesizes noiseless data and ignores snr_db. */
EMVS_API emvs_status emvs_simulate(const emvs_scene *scene, int has_snr, double snr_db, uint64_t seed,
                                   emvs_dataset **out);
/* Wraps interleaved (re, im) doubles in mode-1-major order as a (6MN, 6, L) dataset. */
EMVS_API emvs_status emvs_dataset_create(int M, int N, int L, const double *interleaved, emvs_dataset **out);
EMVS_API emvs_status emvs_dataset_save(const emvs_dataset *data, const char *path);
/* M and N are not stored in the file; they must satisfy I1 == 6*M*N. */
EMVS_API emvs_status emvs_dataset_load(const char *path, int M, int N, emvs_dataset **out);
/* Reads only the header of a dataset file. */
EMVS_API emvs_status emvs_dataset_file_dims(const char *path, uint32_t dims[3]);
EMVS_API emvs_status emvs_dataset_dims(const emvs_dataset *data, uint32_t dims[3]);
/* Copies entry (i1, i2, i3), 0-based, as re/im. */
EMVS_API emvs_status emvs_dataset_entry(const emvs_dataset *data, uint32_t i1, uint32_t i2, uint32_t i3,
                                        double *re, double *im);
EMVS_API void emvs_dataset_free(emvs_dataset *data);

/* ---- estimation ------------------------------------------------------ */

EMVS_API emvs_status emvs_check_identifiability(int M, int N, int K, int L, int *passes,
                                                char *details, size_t details_len);
EMVS_API double emvs_complexity_estimate(int M, int N, int L, int K, int sweeps);

/* opts may be NULL for defaults. */
EMVS_API emvs_status emvs_estimate(const emvs_dataset *data, int K, emvs_method method,
                                   const emvs_als_options *opts, emvs_estimates **out);
EMVS_API int emvs_estimates_count(const emvs_estimates *est);
EMVS_API emvs_status emvs_estimates_get(const emvs_estimates *est, int k, double params[8]);
/* Reorders the estimates onto the scene's target order (minimum total squared error). */
EMVS_API emvs_status emvs_estimates_match(emvs_estimates *est, const emvs_scene *truth);
/* 1 when every ALS stage converged. */
EMVS_API int emvs_estimates_converged(const emvs_estimates *est);
EMVS_API void emvs_estimates_free(emvs_estimates *est);

/* ---- benchmark ------------------------------------------------------- */

EMVS_API emvs_status emvs_bench_config_from_json(const char *json_text, emvs_bench_config **out);
EMVS_API emvs_status emvs_bench_config_load(const char *path, emvs_bench_config **out);
EMVS_API void emvs_bench_config_free(emvs_bench_config *cfg);

EMVS_API emvs_status emvs_bench_run(const emvs_bench_config *cfg, emvs_bench_result **out);
EMVS_API int emvs_bench_result_rows(const emvs_bench_result *res);
EMVS_API emvs_status emvs_bench_result_row(const emvs_bench_result *res, int i, double *snr_db,
                                           emvs_method *method, emvs_param_group *group, double *rmse_rad,
                                           int *trials_used);
/* with_wall_time == 0 writes 0 in the wall_time_s column (reproducible bytes). */
EMVS_API emvs_status emvs_bench_write_csv(const emvs_bench_result *res, const char *path, int with_wall_time);
EMVS_API emvs_status emvs_bench_write_param_csv(const emvs_bench_result *res, const char *path);
EMVS_API emvs_status emvs_bench_write_manifest(const emvs_bench_config *cfg, const emvs_bench_result *res,
                                               const char *path);
EMVS_API void emvs_bench_result_free(emvs_bench_result *res);

#ifdef __cplusplus
}
#endif

#endif
