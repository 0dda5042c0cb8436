#ifndef DLRC_DLRC_H
#define DLRC_DLRC_H

/* C interface to the delay-line reservoir library. Objects are opaque
 * handles released with their matching *_destroy function. Every fallible
 * call returns a dlrc_status; on failure dlrc_last_error() describes the
 * problem for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DLRC_API __declspec(dllexport)
#else
#define DLRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dlrc_status {
    DLRC_OK = 0,
    DLRC_ERR_INVALID_ARGUMENT = 1,
    DLRC_ERR_CONFIG = 2,
    DLRC_ERR_DIMENSION = 3,
    DLRC_ERR_NON_FINITE = 4,
    DLRC_ERR_SINGULAR = 5,
    DLRC_ERR_IO = 6,
    DLRC_ERR_PARSE = 7,
    DLRC_ERR_RUNTIME = 8,
    DLRC_ERR_NULL = 9
} dlrc_status;

DLRC_API const char* dlrc_version(void);
/* Message for the last failed call on this thread; empty if none. */
DLRC_API const char* dlrc_last_error(void);
DLRC_API const char* dlrc_status_name(dlrc_status status);

/* ---- masks ---- */

typedef enum dlrc_mask_family {
    DLRC_MASK_RANDOM_UNIFORM = 0,
    DLRC_MASK_RANDOM_BINARY = 1,
    DLRC_MASK_SINGLE_SINE = 2,
    DLRC_MASK_TWO_SINE = 3
} dlrc_mask_family;

typedef struct dlrc_mask dlrc_mask;

DLRC_API dlrc_status dlrc_mask_create(dlrc_mask_family family, int n_nodes, int f1, int f2, uint64_t seed,
                                      dlrc_mask** out);
DLRC_API dlrc_status dlrc_mask_from_values(const double* values, size_t n, dlrc_mask** out);
DLRC_API size_t dlrc_mask_size(const dlrc_mask* mask);
/* Copies m_1..m_N into values[0..N-1]; capacity must be >= N. */
DLRC_API dlrc_status dlrc_mask_values(const dlrc_mask* mask, double* values, size_t capacity);
/* Continuous-time value m(t) for hold period t_prime. */
DLRC_API dlrc_status dlrc_mask_continuous(const dlrc_mask* mask, double t, double t_prime, double* out);
DLRC_API void dlrc_mask_destroy(dlrc_mask* mask);

/* ---- reservoir ---- */

typedef enum dlrc_nonlinearity {
    DLRC_NONLINEARITY_SINE = 0,
    DLRC_NONLINEARITY_TANH = 1,
    DLRC_NONLINEARITY_SATURATING_GAIN = 2
} dlrc_nonlinearity;

typedef struct dlrc_reservoir_params {
    int n_nodes;
    int offset_k;
    double alpha;
    double beta;
    dlrc_nonlinearity nonlinearity;
    double phase;
    double saturation;
    double noise_std;
    int washout;
} dlrc_reservoir_params;

/* N=53, k=18, alpha 0.8, beta 0.5, sine, phase 0, washout 200. */
DLRC_API void dlrc_reservoir_params_default(dlrc_reservoir_params* params);

typedef struct dlrc_states dlrc_states;

DLRC_API dlrc_status dlrc_run_discrete(const dlrc_reservoir_params* params, const dlrc_mask* mask,
                                       const double* input, size_t length, uint64_t seed, dlrc_states** out);
DLRC_API dlrc_status dlrc_run_continuous(const dlrc_reservoir_params* params, int oversampling, double t_prime,
                                         const dlrc_mask* mask, const double* input, size_t length, uint64_t seed,
                                         dlrc_states** out);
DLRC_API size_t dlrc_states_nodes(const dlrc_states* states);
/* Post-washout length. */
DLRC_API size_t dlrc_states_length(const dlrc_states* states);
/* Column-major N x L copy: out[n * N + (i - 1)] = x_i(n). */
DLRC_API dlrc_status dlrc_states_copy(const dlrc_states* states, double* out, size_t capacity);
DLRC_API void dlrc_states_destroy(dlrc_states* states);

/* ---- readout ---- */

typedef struct dlrc_readout dlrc_readout;

/* Ridge regression on all columns of `states` against target[0..L-1]. */
DLRC_API dlrc_status dlrc_readout_train(const dlrc_states* states, const double* target, size_t length,
                                        double ridge, int with_bias, dlrc_readout** out);
DLRC_API dlrc_status dlrc_readout_predict(const dlrc_readout* readout, const dlrc_states* states, double* out,
                                          size_t capacity);
DLRC_API size_t dlrc_readout_size(const dlrc_readout* readout);
DLRC_API dlrc_status dlrc_readout_weights(const dlrc_readout* readout, double* weights, size_t capacity,
                                          double* bias);
DLRC_API void dlrc_readout_destroy(dlrc_readout* readout);

DLRC_API dlrc_status dlrc_nmse(const double* y, const double* d, size_t n, double* out);
DLRC_API dlrc_status dlrc_ser(const double* y, const double* d, size_t n, double* out);

/* ---- commands ---- */

typedef enum dlrc_log_level { DLRC_LOG_INFO = 0, DLRC_LOG_WARNING = 1, DLRC_LOG_ERROR = 2 } dlrc_log_level;
typedef void (*dlrc_log_fn)(dlrc_log_level level, const char* message, void* user);

/* Optional fields use has_* flags or NULL. */
typedef struct dlrc_command_options {
    const char* config_path;
    int has_seed;
    uint64_t seed;
    int jobs;
    const char* out_dir;
    int resume;
    const char* landscape;
    int snr_curve;
    size_t stop_after;
    const char* mask_family;
    int n_nodes; /* 0 = unset */
    int f1;      /* 0 = unset */
    int f2;      /* 0 = unset */
    int has_mask_seed;
    uint64_t mask_seed;
    dlrc_log_fn log;
    void* log_user;
} dlrc_command_options;

DLRC_API void dlrc_command_options_default(dlrc_command_options* options);

/* Return process exit codes: 0 success, 1 config error, 2 runtime error. */
DLRC_API int dlrc_cmd_run(const dlrc_command_options* options);
DLRC_API int dlrc_cmd_sweep(const dlrc_command_options* options);
DLRC_API int dlrc_cmd_capacity(const dlrc_command_options* options);
DLRC_API int dlrc_cmd_gen_mask(const dlrc_command_options* options);
DLRC_API int dlrc_cmd_dataset(const dlrc_command_options* options);

#ifdef __cplusplus
}
#endif

#endif
