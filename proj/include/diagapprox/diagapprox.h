#ifndef DIAGAPPROX_H
#define DIAGAPPROX_H

/* C interface to the diagapprox library. Rationals cross the boundary as
 * "a" or "a/b" strings; points as ';'-separated coordinates, real first.
 * Every char** output is allocated by the library and released with
 * da_string_free. On failure the message of the last error on the calling
 * thread is available from da_last_error. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DA_API __declspec(dllexport)
#else
#define DA_API __attribute__((visibility("default")))
#endif

typedef enum da_status {
  DA_OK = 0,
  DA_INVALID_ARGUMENT = 1,
  DA_NOT_IN_LOCALIZATION = 2,
  DA_CAP_VIOLATION = 3,
  DA_DIAGONAL_RATIONAL = 4,
  DA_EXHAUSTED = 5,
  DA_PRECISION = 6,
  DA_IO = 7,
  DA_VERIFY_FAILED = 8, /* output was produced, but some check failed */
  DA_INTERNAL = 9
} da_status;

typedef struct da_places da_places;
typedef struct da_psi da_psi;
typedef struct da_config da_config;

DA_API const char* da_version(void);
DA_API const char* da_status_name(da_status status);
DA_API const char* da_last_error(void);
DA_API void da_string_free(char* s);

/* Place sets: "2,3" or "inf,2,3". */
DA_API da_status da_places_create(const char* text, da_places** out);
DA_API void da_places_destroy(da_places* places);
DA_API da_status da_places_describe(const da_places* places, char** out);

/* Elements of P^{-1}Z. */
DA_API da_status da_decompose(const da_places* places, const char* q, char** out); /* "sign unit nu_1 ... nu_r" */
DA_API da_status da_level(const da_places* places, const char* gamma, char** out);
DA_API da_status da_big_L(const da_places* places, const char* gamma, char** out);

/* family: "scaled_cap" (c) or "power" (c, theta). */
DA_API da_status da_psi_create(const char* family, const char* c, unsigned long theta, da_psi** out);
DA_API da_status da_psi_from_table(const char* path, const da_places* places, da_psi** out);
DA_API void da_psi_destroy(da_psi* psi);
DA_API da_status da_psi_eval(const da_psi* psi, const da_places* places, const char* gamma, char** out);

/* Exact measures. */
DA_API da_status da_set_measure(const da_places* places, const da_psi* psi, const char* gamma, char** out);
DA_API da_status da_overlap_measure(const da_places* places, const da_psi* psi, const char* beta,
                                    const char* gamma, char** out);
/* Writes x = z + gamma with z in the fundamental domain; out is "z;gamma-shift". */
DA_API da_status da_reduce(const da_places* places, const char* point, char** out);
DA_API da_status da_membership(const da_places* places, const da_psi* psi, const char* point, const char* gamma,
                               int* inside);

/* Experiment configuration; keys mirror the command-line flags. */
DA_API da_status da_config_create(da_config** out);
DA_API void da_config_destroy(da_config* config);
DA_API da_status da_config_set(da_config* config, const char* key, const char* value);
DA_API da_status da_config_load(da_config* config, const char* path);
DA_API da_status da_config_get(const da_config* config, const char* key, char** out);

/* Commands. Each renders a table in the configured format (csv or json).
 * NULL optional arguments fall back to the configuration. */
DA_API da_status da_cmd_dirichlet(const da_config* config, const char* point, unsigned long n, char** out);
DA_API da_status da_cmd_coprime(const da_config* config, const char* point, unsigned long count, char** out);
DA_API da_status da_cmd_enumerate(const da_config* config, unsigned long n, char** out);
DA_API da_status da_cmd_measure(const da_config* config, const char* gamma, char** out);
DA_API da_status da_cmd_overlap(const da_config* config, const char* beta, const char* gamma, char** out);
DA_API da_status da_cmd_series(const da_config* config, char** out);
DA_API da_status da_cmd_montecarlo(const da_config* config, const char* gammas, char** out);
/* DA_VERIFY_FAILED when any check fails; out holds the summary either way. */
DA_API da_status da_cmd_verify(const da_config* config, char** out);
/* Writes to the configured out path; with no path the report is returned in out. */
DA_API da_status da_cmd_report(const da_config* config, char** out);

#ifdef __cplusplus
}
#endif

#endif
