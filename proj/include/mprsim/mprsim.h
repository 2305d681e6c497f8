// SPDX-License-Identifier: Apache-2.0
//
// mprsim - slotted MAC simulator for multi-packet reception channels
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
 * C interface to the mprsim simulator.
 *
 * Every object is an opaque handle created by a *_create / *_run / *_load
 * call and released with the matching *_destroy. Functions return an
 * mprsim_status; on failure mprsim_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 * Strings returned through `const char**` are owned by the handle they came
 * from and stay valid until that handle is destroyed or the same accessor
 * is called again.
 */

#ifndef MPRSIM_H
#define MPRSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(MPRSIM_BUILDING_LIBRARY)
#define MPRSIM_API __attribute__((visibility("default")))
#else
#define MPRSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mprsim_status
{
    MPRSIM_OK = 0,
    MPRSIM_ERR_ARGUMENT = 1, /* null pointer, unknown enum, index out of range */
    MPRSIM_ERR_CONFIG = 2,   /* invalid experiment settings */
    MPRSIM_ERR_MATRIX = 3,   /* reception matrix failed validation */
    MPRSIM_ERR_IO = 4,
    MPRSIM_ERR_STATE = 5,
    MPRSIM_ERR_MISMATCH = 6, /* replications from different configurations */
    MPRSIM_ERR_INTERNAL = 7
} mprsim_status;

typedef enum mprsim_tie_rule
{
    MPRSIM_TIE_MINIMUM = 0,
    MPRSIM_TIE_MIDDLE = 1
} mprsim_tie_rule;

typedef enum mprsim_output
{
    MPRSIM_OUTPUT_UNSET = -1,
    MPRSIM_OUTPUT_CSV = 0,
    MPRSIM_OUTPUT_JSON = 1
} mprsim_output;

typedef struct mprsim_config mprsim_config;
typedef struct mprsim_report mprsim_report;
typedef struct mprsim_sweep mprsim_sweep;
typedef struct mprsim_matrix mprsim_matrix;

typedef struct mprsim_metrics
{
    double normalized_throughput;
    double mean_mac_delay_us;
    double transmission_efficiency;
    uint64_t delivered;
    uint64_t dropped;
    uint64_t attempts;
    double sim_time_us;
    uint64_t seed;
    /* whole run, warm-up included */
    uint64_t total_enqueued;
    uint64_t total_delivered;
    uint64_t total_dropped;
    uint64_t still_queued;
} mprsim_metrics;

typedef struct mprsim_summary
{
    double throughput_mean;
    double throughput_std;
    double delay_mean_us;
    double delay_std_us;
    double eta_mean;
    double eta_std;
    double dropped_mean;
    uint32_t replications;
} mprsim_summary;

typedef struct mprsim_sweep_row
{
    double swept_value;
    mprsim_summary summary;
} mprsim_sweep_row;

MPRSIM_API const char* mprsim_version(void);
MPRSIM_API const char* mprsim_last_error(void);
MPRSIM_API const char* mprsim_status_string(mprsim_status status);

/* Experiment settings. Keys mirror the CLI flags without the leading
 * dashes: policy, k, kt, lt, n, u, rate-pps, saturated, cwmin, m,
 * retry-limit, slot-us, difs-us, payload-bits, mac-header-bits,
 * phy-header-bits, bitrate, duration-slots, warmup-slots, seed,
 * replications, trace, out. Later calls override earlier ones. */
MPRSIM_API mprsim_status mprsim_config_create(mprsim_config** out);
MPRSIM_API mprsim_status mprsim_config_clone(const mprsim_config* config, mprsim_config** out);
MPRSIM_API void mprsim_config_destroy(mprsim_config* config);
MPRSIM_API mprsim_status mprsim_config_set(mprsim_config* config, const char* key, const char* value);
MPRSIM_API mprsim_status mprsim_config_load_file(mprsim_config* config, const char* path);
MPRSIM_API mprsim_status mprsim_config_validate(const mprsim_config* config);
MPRSIM_API mprsim_status mprsim_config_seed(const mprsim_config* config, uint64_t* out);
MPRSIM_API mprsim_status mprsim_config_replications(const mprsim_config* config, uint32_t* out);
/* *out is NULL when no trace path is configured. */
MPRSIM_API mprsim_status mprsim_config_trace_path(const mprsim_config* config, const char** out);
MPRSIM_API mprsim_status mprsim_config_output(const mprsim_config* config, mprsim_output* out);
/* Resolved configuration as JSON. */
MPRSIM_API mprsim_status mprsim_config_to_json(mprsim_config* config, const char** out);

/* Runs `replications` seeds starting at the configured seed. With a
 * non-NULL trace_path the first replication writes one line per slot. */
MPRSIM_API mprsim_status mprsim_run(const mprsim_config* config,
                                    uint32_t replications,
                                    unsigned threads,
                                    const char* trace_path,
                                    mprsim_report** out);
MPRSIM_API void mprsim_report_destroy(mprsim_report* report);
MPRSIM_API mprsim_status mprsim_report_count(const mprsim_report* report, size_t* out);
MPRSIM_API mprsim_status mprsim_report_metrics(const mprsim_report* report,
                                               size_t replication,
                                               mprsim_metrics* out);
MPRSIM_API mprsim_status mprsim_report_summary(const mprsim_report* report, mprsim_summary* out);
MPRSIM_API mprsim_status mprsim_report_to_json(mprsim_report* report, const char** out);
MPRSIM_API mprsim_status mprsim_report_to_csv(mprsim_report* report, const char** out);
MPRSIM_API mprsim_status mprsim_report_to_key_value(mprsim_report* report,
                                                    size_t replication,
                                                    const char** out);

/* parameter: u, n, k, threshold or cwmin. */
MPRSIM_API mprsim_status mprsim_sweep_run(const mprsim_config* base,
                                          const char* parameter,
                                          const double* values,
                                          size_t value_count,
                                          uint32_t replications,
                                          unsigned threads,
                                          mprsim_sweep** out);
MPRSIM_API void mprsim_sweep_destroy(mprsim_sweep* sweep);
MPRSIM_API mprsim_status mprsim_sweep_row_count(const mprsim_sweep* sweep, size_t* out);
MPRSIM_API mprsim_status mprsim_sweep_get_row(const mprsim_sweep* sweep, size_t index, mprsim_sweep_row* out);
MPRSIM_API mprsim_status mprsim_sweep_to_csv(mprsim_sweep* sweep, const char** out);
MPRSIM_API mprsim_status mprsim_sweep_to_json(mprsim_sweep* sweep, const char** out);

/* Reception matrices: one row per line, row i holding i+1 probabilities. */
MPRSIM_API mprsim_status mprsim_matrix_load_file(const char* path, mprsim_matrix** out);
MPRSIM_API mprsim_status mprsim_matrix_parse(const char* text, mprsim_matrix** out);
MPRSIM_API void mprsim_matrix_destroy(mprsim_matrix* matrix);
MPRSIM_API mprsim_status mprsim_matrix_size(const mprsim_matrix* matrix, size_t* out);
MPRSIM_API mprsim_status mprsim_matrix_expected_successes(const mprsim_matrix* matrix,
                                                          size_t transmissions,
                                                          double* out);
MPRSIM_API mprsim_status mprsim_matrix_kequiv(const mprsim_matrix* matrix,
                                              mprsim_tie_rule rule,
                                              size_t* out);

MPRSIM_API int mprsim_kmpr_success(size_t concurrent, size_t k);

#ifdef __cplusplus
}
#endif

#endif
