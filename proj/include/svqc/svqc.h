/* Copyright 2026 The svqc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the svqc library. Every function that can fail returns an
 * svqc_status; on failure svqc_last_error() describes the problem (per
 * thread, valid until the next failing call on that thread). Objects are
 * opaque handles released with their *_free function. Strings returned
 * through char** are released with svqc_string_free. */

#ifndef SVQC_H
#define SVQC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SVQC_API __declspec(dllexport)
#else
#define SVQC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum svqc_status {
    SVQC_OK = 0,
    SVQC_ERR_INVALID_INPUT = 1,
    SVQC_ERR_CONFIG = 2,
    SVQC_ERR_BRIDGE = 3,
    SVQC_ERR_USAGE = 4,
    SVQC_ERR_STATE = 5,
    SVQC_ERR_NUMERIC = 6,
    SVQC_ERR_IO = 7,
    SVQC_ERR_INTERNAL = 99
} svqc_status;

SVQC_API const char *svqc_last_error(void);
SVQC_API const char *svqc_version(void);
SVQC_API void svqc_string_free(char *s);

/* ---- experiment configuration ---------------------------------------- */

typedef struct svqc_config svqc_config;

SVQC_API size_t svqc_preset_count(void);
/* NULL when i is out of range. */
SVQC_API const char *svqc_preset_name(size_t i);

SVQC_API svqc_status svqc_config_preset(const char *name, svqc_config **out);
SVQC_API svqc_status svqc_config_parse(const char *text, svqc_config **out);
SVQC_API svqc_status svqc_config_load(const char *path, svqc_config **out);
SVQC_API void svqc_config_free(svqc_config *config);

SVQC_API svqc_status svqc_config_to_text(const svqc_config *config, char **out);
/* Writes 16 hex digits and a terminating NUL. */
SVQC_API svqc_status svqc_config_fingerprint(const svqc_config *config, char out[17]);
SVQC_API svqc_status svqc_config_param_counts(const svqc_config *config, size_t *actor, size_t *critic);

SVQC_API svqc_status svqc_config_set_seeds(svqc_config *config, const uint64_t *seeds, size_t n);
SVQC_API svqc_status svqc_config_set_max_episodes(svqc_config *config, int episodes);
SVQC_API svqc_status svqc_config_set_reuse(svqc_config *config, size_t reuse);
SVQC_API svqc_status svqc_config_set_bridge(svqc_config *config, const char *command);

/* ---- training ---------------------------------------------------------- */

/* Called after every episode; may run on worker threads concurrently. */
typedef void (*svqc_episode_fn)(void *user, uint64_t seed, size_t episode, double reward, double avg20, int steps,
                                double wall_ms);

/* Trains every seed of `config` into out_dir. workers = 0 uses one thread
 * per seed up to the hardware concurrency. bridge_command may be NULL. */
SVQC_API svqc_status svqc_train(const svqc_config *config, const char *out_dir, const char *bridge_command,
                                unsigned workers, svqc_episode_fn on_episode, void *user);

/* Continues the run saved in `checkpoint` until max_episodes (0 keeps the
 * saved budget), appending to the curve in out_dir. */
SVQC_API svqc_status svqc_train_resume(const char *checkpoint, int max_episodes, const char *out_dir,
                                       const char *bridge_command, svqc_episode_fn on_episode, void *user);

/* One run per reuse factor, into out_dir/l<reuse>/. */
SVQC_API svqc_status svqc_sweep_reuse(const svqc_config *config, const size_t *reuse, size_t n, const char *out_dir,
                                      const char *bridge_command, svqc_episode_fn on_episode, void *user);

/* Aggregate text for a run directory (or a directory of runs). Also writes
 * mean_<run>.csv series. */
SVQC_API svqc_status svqc_report(const char *dir, char **text);

/* ---- evaluation -------------------------------------------------------- */

typedef struct svqc_eval_options {
    size_t episodes;            /* default 20 */
    uint64_t shots;             /* 0: exact expectations */
    double readout_p;           /* bit-flip probability at measurement */
    double gate_p;              /* depolarizing probability per gate */
    int sample;                 /* nonzero: sample actions instead of argmax */
    uint64_t seed;              /* episode and noise seed */
    const char *bridge_command; /* for bridge environments; may be NULL */
} svqc_eval_options;

SVQC_API void svqc_eval_options_init(svqc_eval_options *options);

typedef struct svqc_eval_result svqc_eval_result;

SVQC_API svqc_status svqc_eval(const char *checkpoint, const svqc_eval_options *options, svqc_eval_result **out);
SVQC_API size_t svqc_eval_result_count(const svqc_eval_result *r);
SVQC_API const double *svqc_eval_result_rewards(const svqc_eval_result *r);
/* Population statistics over all episodes and over the first five. */
SVQC_API void svqc_eval_result_stats(const svqc_eval_result *r, double *mean, double *stddev, double *mean5,
                                     double *stddev5);
SVQC_API void svqc_eval_result_free(svqc_eval_result *r);

/* ---- models ------------------------------------------------------------ */

typedef struct svqc_model svqc_model;

/* The actor stored in a checkpoint. */
SVQC_API svqc_status svqc_model_load(const char *checkpoint, svqc_model **out);
SVQC_API size_t svqc_model_input_dim(const svqc_model *m);
SVQC_API size_t svqc_model_output_dim(const svqc_model *m);
SVQC_API size_t svqc_model_param_count(const svqc_model *m);
/* Writes output_dim logits to out (capacity n_out). */
SVQC_API svqc_status svqc_model_forward(const svqc_model *m, const double *x, size_t n_x, double *out, size_t n_out);
SVQC_API void svqc_model_free(svqc_model *m);

/* ---- circuits ---------------------------------------------------------- */

typedef struct svqc_circuit svqc_circuit;

/* JSON circuit description, e.g. {"standard": 4} or an explicit gate list. */
SVQC_API svqc_status svqc_circuit_parse(const char *text, svqc_circuit **out);
SVQC_API size_t svqc_circuit_feature_count(const svqc_circuit *c);
SVQC_API size_t svqc_circuit_parameter_count(const svqc_circuit *c);
SVQC_API size_t svqc_circuit_output_count(const svqc_circuit *c);
/* Exact <Z> per output qubit. */
SVQC_API svqc_status svqc_circuit_run(const svqc_circuit *c, const double *x, size_t n_x, const double *angles,
                                      size_t n_angles, double *out, size_t n_out);
SVQC_API void svqc_circuit_free(svqc_circuit *c);

/* ---- environment cross-check ------------------------------------------- */

typedef struct svqc_xcheck_report svqc_xcheck_report;

/* Native vs. a live bridge process. */
SVQC_API svqc_status svqc_xcheck_bridge(const char *env_id, size_t steps, const char *bridge_command, uint64_t seed,
                                        svqc_xcheck_report **out);
/* Native vs. a recorded reference trace. steps = 0 replays the whole trace. */
SVQC_API svqc_status svqc_xcheck_trace(const char *trace_path, size_t steps, svqc_xcheck_report **out);
SVQC_API double svqc_xcheck_max_deviation(const svqc_xcheck_report *r);
SVQC_API size_t svqc_xcheck_steps(const svqc_xcheck_report *r);
SVQC_API size_t svqc_xcheck_reward_mismatches(const svqc_xcheck_report *r);
SVQC_API size_t svqc_xcheck_done_mismatches(const svqc_xcheck_report *r);
SVQC_API int svqc_xcheck_passed(const svqc_xcheck_report *r, double tolerance);
/* Borrowed; valid until the report is freed. */
SVQC_API const char *svqc_xcheck_summary(const svqc_xcheck_report *r);
SVQC_API void svqc_xcheck_report_free(svqc_xcheck_report *r);

#ifdef __cplusplus
}
#endif

#endif
